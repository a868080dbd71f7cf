//! Dimension-agnostic inference for the argmin of a mean vector.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod confidence_sets;
pub mod error;
pub mod estimators;
pub mod multi_split;
pub mod normal;
pub mod report;
pub mod sample;
pub mod seeds;
pub mod selection;
pub mod sim;
mod serde_float;

pub use error::{Error, Result};
pub use sample::{Sample, View};
