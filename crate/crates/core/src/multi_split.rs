//! Multi-split aggregation with a bootstrap-calibrated threshold.
//!
//! The statistic is the average of `B` single-split studentized statistics.
//! Its null distribution is approximated by `S` with-replacement resamples.
//! On each resample the selector runs on the raw rows, so the selection
//! noise of the original data is preserved, while the statistic is computed
//! on the same rows shifted to column mean zero, which puts every coordinate
//! at a tied mean.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::argmin_test::{check_alpha, check_index, split_view, studentized_statistic, TestOutcome};
use crate::error::{Error, Result};
use crate::sample::View;
use crate::seeds::{derive_seed, rng_from_seed, stream};
use crate::selection::{select, SelectorKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiSplitConfig {
    pub splits: usize,
    pub resamples: usize,
    /// Rows per calibration resample; `None` means `n`.
    pub resample_size: Option<usize>,
    pub selector: SelectorKind,
    pub seed: u64,
}

impl MultiSplitConfig {
    pub fn new(selector: SelectorKind, seed: u64) -> Self {
        Self { splits: 10, resamples: 500, resample_size: None, selector, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.splits < 1 {
            return Err(Error::domain("multi-split needs at least one split"));
        }
        if self.resamples < 1 {
            return Err(Error::domain("multi-split needs at least one resample"));
        }
        self.selector.validate()
    }

    fn resolved_resample_size(&self, n: usize) -> Result<usize> {
        let m = self.resample_size.unwrap_or(n);
        if m < 4 || m > n {
            return Err(Error::domain(format!(
                "resample size must lie in [4, {n}], got {m}"
            )));
        }
        Ok(m)
    }
}

fn split_statistics(
    data: View<'_>,
    r: usize,
    splits: usize,
    selector: &SelectorKind,
    seed: u64,
) -> Result<(f64, Vec<f64>, usize)> {
    let mut stats = Vec::with_capacity(splits);
    let mut first_selected = 0;
    for b in 0..splits {
        let split = split_view(data, derive_seed(seed, stream::SPLIT, b as u64))?;
        let s_hat = select(split.d2(), r, selector)?;
        if b == 0 {
            first_selected = s_hat;
        }
        stats.push(studentized_statistic(split.d1(), r, s_hat)?);
    }
    let mean = stats.iter().sum::<f64>() / splits as f64;
    // Splits with opposite infinite statistics carry no net evidence.
    Ok((if mean.is_nan() { 0.0 } else { mean }, stats, first_selected))
}

/// The average `T̄` of the split statistics and the statistics themselves.
/// Split `b` uses the seed `derive_seed(cfg.seed, SPLIT, b)`.
pub fn averaged_statistic(data: View<'_>, r: usize, cfg: &MultiSplitConfig) -> Result<(f64, Vec<f64>)> {
    cfg.validate()?;
    check_index(data.cols(), r)?;
    let (mean, stats, _) = split_statistics(data, r, cfg.splits, &cfg.selector, cfg.seed)?;
    Ok((mean, stats))
}

/// Averaged null statistics on `S` resamples. Resample `j` draws its rows
/// with seed `derive_seed(cfg.seed, RESAMPLE, j)`.
fn resample_statistics(data: View<'_>, r: usize, cfg: &MultiSplitConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    check_index(data.cols(), r)?;
    let n = data.len();
    let m = cfg.resolved_resample_size(n)?;
    let raw = data.to_sample();
    let centered = raw.column_centered();
    (0..cfg.resamples)
        .into_par_iter()
        .map(|j| {
            let seed = derive_seed(cfg.seed, stream::RESAMPLE, j as u64);
            let mut rng = rng_from_seed(seed);
            let rows: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
            let resample = raw.subset(&rows);
            let mut total = 0.0;
            for b in 0..cfg.splits {
                let split = split_view(resample, derive_seed(seed, stream::SPLIT, b as u64))?;
                let s_hat = select(split.d2(), r, &cfg.selector)?;
                let d1 = centered.subset(&split.order()[..split.d1().len()]);
                total += studentized_statistic(d1, r, s_hat)?;
            }
            let mean = total / cfg.splits as f64;
            Ok(if mean.is_nan() { 0.0 } else { mean })
        })
        .collect()
}

fn order_statistic_threshold(mut stats: Vec<f64>, alpha: f64) -> f64 {
    stats.sort_unstable_by(f64::total_cmp);
    let s = stats.len();
    let rank = ((s as f64 * (1.0 - alpha)).ceil() as usize).clamp(1, s);
    stats[rank - 1]
}

/// The `⌈S(1-α)⌉`-th order statistic of the resampled null statistics.
pub fn resample_threshold(data: View<'_>, r: usize, alpha: f64, cfg: &MultiSplitConfig) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(order_statistic_threshold(resample_statistics(data, r, cfg)?, alpha))
}

/// Rejects when `T̄` exceeds the resampling threshold. The p-value is
/// `(1 + #{T_j ≥ T̄}) / (S + 1)`.
pub fn multisplit_test(data: View<'_>, r: usize, alpha: f64, cfg: &MultiSplitConfig) -> Result<TestOutcome> {
    check_alpha(alpha)?;
    cfg.validate()?;
    check_index(data.cols(), r)?;
    let (statistic, _, selected) = split_statistics(data, r, cfg.splits, &cfg.selector, cfg.seed)?;
    let null_stats = resample_statistics(data, r, cfg)?;
    let exceed = null_stats.iter().filter(|&&t| t >= statistic).count();
    let p_value = (1 + exceed) as f64 / (null_stats.len() + 1) as f64;
    let threshold = order_statistic_threshold(null_stats, alpha);
    Ok(TestOutcome {
        statistic,
        threshold,
        p_value,
        selected,
        reject: statistic > threshold,
        alpha,
        seed: cfg.seed,
    })
}
