//! Deterministic seed derivation.
//!
//! Every random choice in the crate (sample splits, resamples, replications)
//! draws from a ChaCha stream seeded by [`derive_seed`], so results depend only
//! on the user seed and never on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags separating independent uses of one base seed.
pub mod stream {
    pub const SPLIT: u64 = 1;
    pub const RESAMPLE: u64 = 2;
    pub const PRESCREEN: u64 = 3;
    pub const FINAL: u64 = 4;
    pub const SCREEN: u64 = 5;
    pub const DATA: u64 = 6;
    pub const METHOD: u64 = 7;
    pub const SCENARIO: u64 = 8;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for `index` within `stream` of `base`.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let z = splitmix64(base ^ stream.wrapping_mul(0xD6E8_FEB8_6659_FD93));
    splitmix64(z ^ index.wrapping_mul(0xA076_1D64_78BD_642F))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
