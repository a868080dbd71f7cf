//! Confidence sets for the argmin and intervals for the smallest mean.
//!
//! Inverting a test means running it for every candidate `r` and keeping
//! the indices that are not rejected. All tests in one inversion share the
//! same split of the data, so the set is a function of a single partition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::argmin_test::{
    check_alpha, split_view, studentize, studentized_statistic, TestOutcome,
};
use crate::estimators::ContrastCovariance;
use crate::error::{Error, Result};
use crate::multi_split::{multisplit_test, MultiSplitConfig};
use crate::normal::{normal_sf, upper_critical_value};
use crate::sample::View;
use crate::seeds::{derive_seed, stream};
use crate::selection::{select_all, SelectorKind};

/// Sorted, duplicate-free zero-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IndexSet {
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn full(d: usize) -> Self {
        Self { members: (0..d).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members.binary_search(&k).is_ok()
    }

    pub fn is_superset_of(&self, other: &IndexSet) -> bool {
        other.members.iter().all(|&k| self.contains(k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionDiagnostic {
    pub set: IndexSet,
    pub tau: usize,
    pub eps_star: f64,
}

/// A level-`α` test of `H0: r is an argmin` to be inverted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestProcedure {
    SingleSplit(SelectorKind),
    /// The seed inside the configuration is replaced by the inversion seed.
    MultiSplit(MultiSplitConfig),
    Bonferroni,
}

/// Per-index outcomes of `tester` at level `alpha` for every `r`.
pub fn invert_test(
    data: View<'_>,
    alpha: f64,
    tester: &TestProcedure,
    seed: u64,
) -> Result<Vec<TestOutcome>> {
    check_alpha(alpha)?;
    let d = data.cols();
    if d < 2 {
        return Err(Error::domain(format!("argmin inference needs d >= 2, got d = {d}")));
    }
    match tester {
        TestProcedure::SingleSplit(selector) => {
            selector.validate()?;
            let split = split_view(data, seed)?;
            let selected = select_all(split.d2(), selector)?;
            let threshold = upper_critical_value(alpha)?;
            selected
                .into_par_iter()
                .enumerate()
                .map(|(r, s_hat)| {
                    let statistic = studentized_statistic(split.d1(), r, s_hat)?;
                    Ok(TestOutcome {
                        statistic,
                        threshold,
                        p_value: normal_sf(statistic),
                        selected: s_hat,
                        reject: statistic > threshold,
                        alpha,
                        seed,
                    })
                })
                .collect()
        }
        TestProcedure::MultiSplit(cfg) => {
            let cfg = MultiSplitConfig { seed, ..*cfg };
            (0..d).into_par_iter().map(|r| multisplit_test(data, r, alpha, &cfg)).collect()
        }
        TestProcedure::Bonferroni => {
            let n = data.len();
            let cov = ContrastCovariance::compute(data)?;
            let means = cov.means();
            let comparisons = (d - 1) as f64;
            let threshold = upper_critical_value(alpha / comparisons)?;
            Ok((0..d)
                .map(|r| {
                    let (mut selected, mut statistic) = (usize::MAX, f64::NEG_INFINITY);
                    for k in (0..d).filter(|&k| k != r) {
                        let t = studentize(n, means[r] - means[k], cov.variance(r, k));
                        if selected == usize::MAX || t > statistic {
                            selected = k;
                            statistic = t;
                        }
                    }
                    TestOutcome {
                        statistic,
                        threshold,
                        p_value: (comparisons * normal_sf(statistic)).min(1.0),
                        selected,
                        reject: statistic > threshold,
                        alpha,
                        seed: 0,
                    }
                })
                .collect())
        }
    }
}

/// Indices not rejected by the level-`alpha` test.
pub fn pointwise_confset(
    data: View<'_>,
    alpha: f64,
    tester: &TestProcedure,
    seed: u64,
) -> Result<IndexSet> {
    let outcomes = invert_test(data, alpha, tester, seed)?;
    Ok(IndexSet::new(
        outcomes.iter().enumerate().filter(|(_, o)| !o.reject).map(|(k, _)| k).collect(),
    ))
}

/// Uniform-coverage set from single-split tests at level `alpha / d`.
pub fn mcs_one_step(
    data: View<'_>,
    alpha: f64,
    selector: &SelectorKind,
    seed: u64,
) -> Result<IndexSet> {
    check_alpha(alpha)?;
    let level = alpha / data.cols() as f64;
    pointwise_confset(data, level, &TestProcedure::SingleSplit(*selector), seed)
}

/// Two-step uniform-coverage set. Indices surviving a lenient prescreen on
/// the selection half (level `|D2|^{-1/2}`) set the Bonferroni factor for
/// the final tests on the full sample, run at `alpha / max(1, |Θ̂2|)`.
pub fn mcs_two_step(
    data: View<'_>,
    alpha: f64,
    selector: &SelectorKind,
    seed: u64,
) -> Result<IndexSet> {
    let (set, _) = mcs_two_step_with_screen(data, alpha, selector, seed)?;
    Ok(set)
}

/// [`mcs_two_step`] also returning the prescreened set.
pub fn mcs_two_step_with_screen(
    data: View<'_>,
    alpha: f64,
    selector: &SelectorKind,
    seed: u64,
) -> Result<(IndexSet, IndexSet)> {
    check_alpha(alpha)?;
    let n = data.len();
    if n < 8 {
        return Err(Error::domain(format!("two-step set needs at least 8 rows, got {n}")));
    }
    let tester = TestProcedure::SingleSplit(*selector);
    let split = split_view(data, seed)?;
    let d2 = split.d2();
    let screen_level = 1.0 / (d2.len() as f64).sqrt();
    let screen =
        pointwise_confset(d2, screen_level, &tester, derive_seed(seed, stream::PRESCREEN, 0))?;
    let level = alpha / screen.len().max(1) as f64;
    let set = pointwise_confset(data, level, &tester, derive_seed(seed, stream::FINAL, 0))?;
    Ok((set, screen))
}

fn column_mean_sd(view: View<'_>, cols: &[usize]) -> Vec<(f64, f64)> {
    let n = view.len() as f64;
    let mut column = Vec::with_capacity(view.len());
    cols.iter()
        .map(|&k| {
            view.column_into(k, &mut column);
            let mean = column.iter().sum::<f64>() / n;
            let var = column.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            (mean, var.sqrt())
        })
        .collect()
}

fn min_mean_interval(view: View<'_>, cols: &[usize], alpha: f64) -> Result<Interval> {
    let t = upper_critical_value(alpha / (2.0 * cols.len() as f64))?;
    let root_n = (view.len() as f64).sqrt();
    let (mut lo, mut hi) = (f64::INFINITY, f64::INFINITY);
    for (mean, sd) in column_mean_sd(view, cols) {
        lo = lo.min(mean - t * sd / root_n);
        hi = hi.min(mean + t * sd / root_n);
    }
    Ok(Interval { lo, hi })
}

/// Bonferroni interval for `min_k μ_k` over all `d` coordinates.
pub fn smallest_mean_c1(data: View<'_>, alpha: f64) -> Result<Interval> {
    check_alpha(alpha)?;
    let n = data.len();
    if n < 2 {
        return Err(Error::domain(format!("interval needs at least 2 rows, got {n}")));
    }
    let cols: Vec<usize> = (0..data.cols()).collect();
    min_mean_interval(data, &cols, alpha)
}

/// Adaptive interval for `min_k μ_k`: the two-step set with the adjusted
/// selector screens candidates on `D2` at level `alpha / log|D2|`, and the
/// Bonferroni interval on `D1` only corrects over the `d̂` survivors. An
/// empty screen falls back to all indices. Returns the interval and `d̂`.
pub fn smallest_mean_c2(data: View<'_>, alpha: f64, seed: u64) -> Result<(Interval, usize)> {
    check_alpha(alpha)?;
    let n = data.len();
    if n < 16 {
        return Err(Error::domain(format!("adaptive interval needs at least 16 rows, got {n}")));
    }
    let split = split_view(data, seed)?;
    let d2 = split.d2();
    let screen_alpha = alpha / (d2.len() as f64).ln();
    let screen = mcs_two_step(
        d2,
        screen_alpha,
        &SelectorKind::adjusted(),
        derive_seed(seed, stream::SCREEN, 0),
    )?;
    let screen = if screen.is_empty() { IndexSet::full(data.cols()) } else { screen };
    let interval = min_mean_interval(split.d1(), screen.members(), alpha)?;
    Ok((interval, screen.len()))
}

/// Indices whose gap to the minimum is at least half of `r`'s gap but
/// within `cn·√(log d / n)`, excluding `r` and the argmin over `k ≠ r`.
/// Also reports `τ` and the critical radius `√(max(1, log τ) / n)`.
pub fn confusion_set(mu: &[f64], r: usize, n: usize, cn: f64) -> Result<ConfusionDiagnostic> {
    let d = mu.len();
    if d < 2 {
        return Err(Error::domain(format!("confusion set needs d >= 2, got d = {d}")));
    }
    if r >= d {
        return Err(Error::domain(format!("index {r} out of range for d = {d}")));
    }
    if n < 1 {
        return Err(Error::domain("confusion set needs n >= 1"));
    }
    if !(cn > 0.0) {
        return Err(Error::domain(format!("C_n must be positive, got {cn}")));
    }
    if mu.iter().any(|m| !m.is_finite()) {
        return Err(Error::input("mean vector has a non-finite entry"));
    }
    let mu_star = mu.iter().copied().fold(f64::INFINITY, f64::min);
    let runner_up = mu
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != r)
        .map(|(_, &m)| m)
        .fold(f64::INFINITY, f64::min);
    let lower = (mu[r] - mu_star) / 2.0;
    let upper = cn * ((d as f64).ln() / n as f64).sqrt();
    let members: Vec<usize> = (0..d)
        .filter(|&k| k != r && mu[k] != runner_up)
        .filter(|&k| {
            let gap = mu[k] - mu_star;
            lower <= gap && gap <= upper
        })
        .collect();
    let tau = members.len();
    let log_tau = if tau > 1 { (tau as f64).ln() } else { 0.0 };
    Ok(ConfusionDiagnostic {
        set: IndexSet::new(members),
        tau,
        eps_star: (log_tau.max(1.0) / n as f64).sqrt(),
    })
}
