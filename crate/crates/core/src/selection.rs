//! Runner-up selection on the selection half of a split.
//!
//! Both selectors return the smallest index attaining the minimum score over
//! `k ≠ r` (the `sargmin` convention), so ties never depend on iteration
//! order or thread count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{column_locations, contrast_variances, ContrastCovariance, RobustParams};
use crate::sample::View;

/// Default floor on the contrast standard deviation in the adjusted score.
pub const DEFAULT_KAPPA: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectorBase {
    /// Smallest location estimate.
    Plugin,
    /// Smallest location gap to `r` scaled by the contrast standard deviation.
    Adjusted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectorKind {
    pub base: SelectorBase,
    pub robust: Option<RobustParams>,
    pub kappa: f64,
}

impl SelectorKind {
    pub fn plugin() -> Self {
        Self { base: SelectorBase::Plugin, robust: None, kappa: DEFAULT_KAPPA }
    }

    pub fn adjusted() -> Self {
        Self { base: SelectorBase::Adjusted, robust: None, kappa: DEFAULT_KAPPA }
    }

    pub fn with_robust(mut self, robust: RobustParams) -> Self {
        self.robust = Some(robust);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::domain(format!("kappa must be positive, got {}", self.kappa)));
        }
        if let Some(robust) = &self.robust {
            robust.validate()?;
        }
        Ok(())
    }

    /// Short method label such as `plug`, `adj-mom` or `adj-catoni`.
    pub fn label(&self) -> String {
        use crate::estimators::RobustKind;
        let base = match self.base {
            SelectorBase::Plugin => "plug",
            SelectorBase::Adjusted => "adj",
        };
        match self.robust.map(|r| r.kind) {
            None => base.to_string(),
            Some(RobustKind::MedianOfMeans) => format!("{base}-mom"),
            Some(RobustKind::Catoni) => format!("{base}-catoni"),
        }
    }
}

fn check_target(view: View<'_>, r: usize) -> Result<()> {
    let d = view.cols();
    if d < 2 {
        return Err(Error::domain(format!("selection needs d >= 2, got d = {d}")));
    }
    if r >= d {
        return Err(Error::domain(format!("index {r} out of range for d = {d}")));
    }
    if view.is_empty() {
        return Err(Error::domain("selection half is empty"));
    }
    Ok(())
}

/// Smallest `k ≠ r` attaining the minimum of `scores`.
pub(crate) fn sargmin_excluding(scores: &[f64], r: usize) -> usize {
    let mut best = usize::MAX;
    let mut best_score = f64::INFINITY;
    for (k, &s) in scores.iter().enumerate() {
        if k != r && (best == usize::MAX || s < best_score) {
            best = k;
            best_score = s;
        }
    }
    best
}

/// Index `k ≠ r` with the smallest location estimate on `d2`.
pub fn select_plugin(d2: View<'_>, r: usize, robust: Option<&RobustParams>) -> Result<usize> {
    check_target(d2, r)?;
    let locations = column_locations(d2, robust)?;
    Ok(sargmin_excluding(&locations, r))
}

/// Index `k ≠ r` minimizing `(loc_k - loc_r) / max(sd(X_r - X_k), κ)` on `d2`.
pub fn select_adjusted(
    d2: View<'_>,
    r: usize,
    robust: Option<&RobustParams>,
    kappa: f64,
) -> Result<usize> {
    check_target(d2, r)?;
    if !(kappa > 0.0) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa}")));
    }
    let (means, variances) = contrast_variances(d2, r)?;
    let locations = match robust {
        None => means,
        Some(params) => column_locations(d2, Some(params))?,
    };
    let loc_r = locations[r];
    let scores: Vec<f64> = locations
        .iter()
        .zip(&variances)
        .map(|(loc, var)| (loc - loc_r) / var.sqrt().max(kappa))
        .collect();
    Ok(sargmin_excluding(&scores, r))
}

/// Runs the selector described by `kind`.
pub fn select(d2: View<'_>, r: usize, kind: &SelectorKind) -> Result<usize> {
    kind.validate()?;
    match kind.base {
        SelectorBase::Plugin => select_plugin(d2, r, kind.robust.as_ref()),
        SelectorBase::Adjusted => select_adjusted(d2, r, kind.robust.as_ref(), kind.kappa),
    }
}

/// The selected runner-up for every target `r` on the same selection half.
/// Locations (and, for the adjusted rule, the contrast covariance) are
/// computed once and shared across targets.
pub fn select_all(d2: View<'_>, kind: &SelectorKind) -> Result<Vec<usize>> {
    kind.validate()?;
    check_target(d2, 0)?;
    let d = d2.cols();
    match kind.base {
        SelectorBase::Plugin => {
            let locations = column_locations(d2, kind.robust.as_ref())?;
            // The two smallest locations determine every answer.
            let first = sargmin_excluding(&locations, usize::MAX);
            let second = sargmin_excluding(&locations, first);
            Ok((0..d).map(|r| if r == first { second } else { first }).collect())
        }
        SelectorBase::Adjusted => {
            let cov = ContrastCovariance::compute(d2)?;
            let locations = match &kind.robust {
                None => cov.means().to_vec(),
                Some(params) => column_locations(d2, Some(params))?,
            };
            let mut scores = vec![0.0; d];
            Ok((0..d)
                .map(|r| {
                    for (k, s) in scores.iter_mut().enumerate() {
                        *s = (locations[k] - locations[r]) / cov.variance(r, k).sqrt().max(kind.kappa);
                    }
                    sargmin_excluding(&scores, r)
                })
                .collect())
        }
    }
}
