//! Location and contrast estimators shared by every inference procedure.
//!
//! Contrast variances are always computed from per-row differences (or the
//! equivalent per-column accumulators), never from a materialized `d × d`
//! covariance matrix, so a selection step costs `O(n·d)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::View;

/// Column means of a sample together with the row count they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub means: Vec<f64>,
    pub count: usize,
}

/// The contrast `e_r - e_k` between a target coordinate `r` and a comparison
/// coordinate `k` (both zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContrastSpec {
    r: usize,
    k: usize,
}

impl ContrastSpec {
    pub fn new(r: usize, k: usize, d: usize) -> Result<Self> {
        if r >= d || k >= d {
            return Err(Error::domain(format!(
                "contrast ({r}, {k}) out of range for d = {d}"
            )));
        }
        if r == k {
            return Err(Error::domain("contrast needs two distinct coordinates"));
        }
        Ok(Self { r, k })
    }

    pub fn target(&self) -> usize {
        self.r
    }

    pub fn comparison(&self) -> usize {
        self.k
    }

    pub fn flipped(&self) -> Self {
        Self { r: self.k, k: self.r }
    }
}

/// How many median-of-means blocks to use for a sample of `n` rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MomBlocks {
    /// `V = ⌊√n⌋`.
    SqrtN,
    Fixed(usize),
    /// `V = ⌈4.5·⌈log(1/η)⌉⌉` with `η = 1/2 ∧ (1/C'_n ∨ e^{-C_n} ∨ e^{-n/18})`.
    /// There is no default for the two sequences; callers supply them.
    Theoretical { cn: f64, cn_prime: f64 },
}

impl MomBlocks {
    pub fn resolve(&self, n: usize) -> Result<usize> {
        let v = match *self {
            MomBlocks::SqrtN => (n as f64).sqrt().floor() as usize,
            MomBlocks::Fixed(v) => v,
            MomBlocks::Theoretical { cn, cn_prime } => {
                if !(cn > 0.0 && cn_prime > 0.0) {
                    return Err(Error::domain("C_n and C'_n must be positive"));
                }
                let eta = (1.0 / cn_prime)
                    .max((-cn).exp())
                    .max((-(n as f64) / 18.0).exp())
                    .min(0.5);
                (4.5 * (1.0 / eta).ln().ceil()).ceil() as usize
            }
        };
        if v < 1 || 2 * v > n {
            return Err(Error::domain(format!(
                "median-of-means needs 1 <= V <= n/2, got V = {v} for n = {n}"
            )));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RobustKind {
    MedianOfMeans,
    Catoni,
}

/// Robust replacement for the sample mean used during selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustParams {
    pub kind: RobustKind,
    pub mom_blocks: MomBlocks,
    pub catoni_delta: f64,
}

impl RobustParams {
    pub fn median_of_means() -> Self {
        Self { kind: RobustKind::MedianOfMeans, mom_blocks: MomBlocks::SqrtN, catoni_delta: 0.05 }
    }

    pub fn catoni() -> Self {
        Self { kind: RobustKind::Catoni, mom_blocks: MomBlocks::SqrtN, catoni_delta: 0.05 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.catoni_delta > 0.0 && self.catoni_delta < 1.0) {
            return Err(Error::domain(format!(
                "Catoni confidence parameter {} is outside (0, 1)",
                self.catoni_delta
            )));
        }
        if let MomBlocks::Fixed(0) = self.mom_blocks {
            return Err(Error::domain("median-of-means needs at least one block"));
        }
        Ok(())
    }
}

pub fn column_means(view: View<'_>) -> Result<ColumnStats> {
    let n = view.len();
    if n == 0 {
        return Err(Error::domain("column means of an empty sample"));
    }
    let means = view.column_sums().into_iter().map(|s| s / n as f64).collect();
    Ok(ColumnStats { means, count: n })
}

/// Mean and unbiased variance of the per-row contrast `X_r - X_k`, plus
/// whether every difference is identical.
pub(crate) fn contrast_moments(view: View<'_>, c: ContrastSpec) -> Result<(f64, f64, bool)> {
    let n = view.len();
    if n < 2 {
        return Err(Error::domain(format!(
            "contrast variance needs at least 2 rows, got {n}"
        )));
    }
    let (r, k) = (c.r, c.k);
    let first = view.row(0)[r] - view.row(0)[k];
    let mut sum = 0.0;
    let mut constant = true;
    for row in view.iter_rows() {
        let diff = row[r] - row[k];
        constant &= diff == first;
        sum += diff;
    }
    let mean = sum / n as f64;
    if constant {
        return Ok((first, 0.0, true));
    }
    let ss: f64 = view
        .iter_rows()
        .map(|row| {
            let dev = row[r] - row[k] - mean;
            dev * dev
        })
        .sum();
    Ok((mean, ss / (n - 1) as f64, false))
}

/// Unbiased sample variance of `X_r - X_k`, i.e. `γᵀ Σ̂ γ` for `γ = e_r - e_k`.
pub fn contrast_variance(view: View<'_>, c: ContrastSpec) -> Result<f64> {
    contrast_moments(view, c).map(|(_, var, _)| var)
}

/// Column means and the contrast variances `Var(X_r - X_k)` for every `k`
/// in one pass over the rows. Entry `r` of the variances is zero.
///
/// Data are shifted by the first row before accumulating, which keeps the
/// raw-moment formulas well conditioned for data far from the origin.
pub fn contrast_variances(view: View<'_>, r: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = view.len();
    let d = view.cols();
    if n < 2 {
        return Err(Error::domain(format!(
            "contrast variance needs at least 2 rows, got {n}"
        )));
    }
    if r >= d {
        return Err(Error::domain(format!("index {r} out of range for d = {d}")));
    }
    let shift = view.row(0);
    let mut sum = vec![0.0; d];
    let mut sq = vec![0.0; d];
    let mut cross = vec![0.0; d];
    for row in view.iter_rows().skip(1) {
        let yr = row[r] - shift[r];
        let acc = sum.iter_mut().zip(sq.iter_mut()).zip(cross.iter_mut());
        for (((s, q), c), (x, sh)) in acc.zip(row.iter().zip(shift)) {
            let v = x - sh;
            *s += v;
            *q += v * v;
            *c += yr * v;
        }
    }
    let nf = n as f64;
    let means = shift.iter().zip(&sum).map(|(s, t)| s + t / nf).collect();
    let variances = (0..d)
        .map(|k| {
            if k == r {
                return 0.0;
            }
            let dsum = sum[r] - sum[k];
            let dsq = sq[r] + sq[k] - 2.0 * cross[k];
            ((dsq - dsum * dsum / nf) / (nf - 1.0)).max(0.0)
        })
        .collect();
    Ok((means, variances))
}

/// Centered Gram matrix of a view, giving every contrast variance
/// `Var(X_r - X_k)` in constant time. Building it costs one `n × d × d`
/// matrix product, which pays off when contrasts against many targets `r`
/// are needed on the same rows.
#[derive(Debug, Clone)]
pub struct ContrastCovariance {
    means: Vec<f64>,
    gram: Vec<f64>,
    d: usize,
    n: usize,
}

impl ContrastCovariance {
    pub fn compute(view: View<'_>) -> Result<Self> {
        let n = view.len();
        let d = view.cols();
        if n < 2 {
            return Err(Error::domain(format!(
                "contrast variance needs at least 2 rows, got {n}"
            )));
        }
        let means = column_means(view)?.means;
        let mut centered = Vec::with_capacity(n * d);
        for row in view.iter_rows() {
            centered.extend(row.iter().zip(&means).map(|(x, m)| x - m));
        }
        let mut gram = vec![0.0; d * d];
        // gram = Yᵀ Y with Y the row-major n × d centered matrix. Both buffers
        // match the dimensions and strides passed to the kernel.
        unsafe {
            matrixmultiply::dgemm(
                d,
                n,
                d,
                1.0,
                centered.as_ptr(),
                1,
                d as isize,
                centered.as_ptr(),
                d as isize,
                1,
                0.0,
                gram.as_mut_ptr(),
                d as isize,
                1,
            );
        }
        Ok(Self { means, gram, d, n })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    /// Unbiased sample variance of `X_r - X_k`.
    pub fn variance(&self, r: usize, k: usize) -> f64 {
        if r == k {
            return 0.0;
        }
        let g = |a: usize, b: usize| self.gram[a * self.d + b];
        ((g(r, r) + g(k, k) - 2.0 * g(r, k)) / (self.n - 1) as f64).max(0.0)
    }
}

/// Median of a slice, taking the midpoint of the two central order
/// statistics for even lengths. Reorders `values`.
pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    debug_assert!(n > 0);
    let mid = n / 2;
    let (_, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = values[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

/// Block boundaries: contiguous runs of `⌊n/V⌋` with the first `n mod V`
/// blocks one element longer.
fn mom_block_sizes(n: usize, blocks: usize) -> impl Iterator<Item = usize> {
    let base = n / blocks;
    let extra = n % blocks;
    (0..blocks).map(move |v| base + usize::from(v < extra))
}

/// Median of the means of `blocks` contiguous blocks of `values`.
pub fn mom_estimate(values: &[f64], blocks: usize) -> Result<f64> {
    let n = values.len();
    if blocks < 1 || blocks > n {
        return Err(Error::domain(format!(
            "median-of-means needs 1 <= V <= n, got V = {blocks}, n = {n}"
        )));
    }
    let mut start = 0;
    let mut block_means: Vec<f64> = mom_block_sizes(n, blocks)
        .map(|len| {
            let block = &values[start..start + len];
            start += len;
            block.iter().sum::<f64>() / len as f64
        })
        .collect();
    Ok(median_in_place(&mut block_means))
}

/// Median-of-means for every column of a view, blocks taken in view order.
pub fn column_mom(view: View<'_>, blocks: usize) -> Result<Vec<f64>> {
    let n = view.len();
    let d = view.cols();
    if blocks < 1 || blocks > n {
        return Err(Error::domain(format!(
            "median-of-means needs 1 <= V <= n, got V = {blocks}, n = {n}"
        )));
    }
    let mut block_means = vec![0.0; blocks * d];
    let mut j = 0;
    for (v, len) in mom_block_sizes(n, blocks).enumerate() {
        let acc = &mut block_means[v * d..(v + 1) * d];
        for _ in 0..len {
            for (a, x) in acc.iter_mut().zip(view.row(j)) {
                *a += x;
            }
            j += 1;
        }
        acc.iter_mut().for_each(|a| *a /= len as f64);
    }
    let mut column = vec![0.0; blocks];
    Ok((0..d)
        .map(|k| {
            for (v, c) in column.iter_mut().enumerate() {
                *c = block_means[v * d + k];
            }
            median_in_place(&mut column)
        })
        .collect())
}

/// Catoni's influence function `f(u) = sign(u)·log(1 + |u| + u²/2)`.
#[inline]
pub fn catoni_influence(u: f64) -> f64 {
    let a = u.abs();
    (a + 0.5 * a * a).ln_1p().copysign(u)
}

/// Scale parameter `α̃` of Catoni's estimator with the unknown variance
/// replaced by `variance`.
pub fn catoni_scale(n: usize, variance: f64, delta: f64) -> f64 {
    let log_inv = (1.0 / delta).ln();
    let nf = n as f64;
    let eta_sq = 2.0 * variance * log_inv / (nf - 2.0 * log_inv);
    (2.0 * log_inv / (nf * (variance + eta_sq))).sqrt()
}

/// Value of the Catoni estimating equation `Σ f(α̃ (x_i - θ))`.
pub fn catoni_objective(values: &[f64], scale: f64, theta: f64) -> f64 {
    values.iter().map(|x| catoni_influence(scale * (x - theta))).sum()
}

const CATONI_MAX_ITER: usize = 200;

/// Catoni's M-estimator of location with confidence parameter `delta`,
/// solved by bisection on `[min - 1/α̃, max + 1/α̃]` until the estimating
/// equation is within `1e-10·n` of zero.
pub fn catoni_estimate(values: &[f64], delta: f64) -> Result<f64> {
    let n = values.len();
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta {delta} is outside (0, 1)")));
    }
    if n < 2 {
        return Err(Error::domain("Catoni's estimator needs at least 2 values"));
    }
    let log_inv = (1.0 / delta).ln();
    if (n as f64) <= 2.0 * log_inv {
        return Err(Error::domain(format!(
            "Catoni's estimator needs n > 2 log(1/delta) = {:.3}, got n = {n}",
            2.0 * log_inv
        )));
    }
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut sum = 0.0;
    for &x in values {
        min = min.min(x);
        max = max.max(x);
        sum += x;
    }
    if min == max {
        return Ok(min);
    }
    let mean = sum / n as f64;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    let scale = catoni_scale(n, var, delta);

    let tol = 1e-10 * n as f64;
    let mut lo = min - 1.0 / scale;
    let mut hi = max + 1.0 / scale;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..CATONI_MAX_ITER {
        mid = 0.5 * (lo + hi);
        let g = catoni_objective(values, scale, mid);
        if g.abs() <= tol {
            break;
        }
        if g > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
    }
    Ok(mid)
}

/// Per-column location estimates: sample means, or the robust estimator.
pub fn column_locations(view: View<'_>, robust: Option<&RobustParams>) -> Result<Vec<f64>> {
    let Some(params) = robust else {
        return Ok(column_means(view)?.means);
    };
    params.validate()?;
    match params.kind {
        RobustKind::MedianOfMeans => {
            let blocks = params.mom_blocks.resolve(view.len())?;
            column_mom(view, blocks)
        }
        RobustKind::Catoni => {
            let mut column = Vec::with_capacity(view.len());
            (0..view.cols())
                .map(|k| {
                    view.column_into(k, &mut column);
                    catoni_estimate(&column, params.catoni_delta)
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sample;
    use proptest::prelude::*;

    fn sample(rows: &[&[f64]]) -> Sample {
        Sample::from_rows(rows).unwrap()
    }

    // Full d×d sample covariance, computed independently of the contrast path.
    fn quadratic_form_oracle(s: &Sample, r: usize, k: usize) -> f64 {
        let n = s.rows();
        let d = s.cols();
        let means: Vec<f64> =
            (0..d).map(|j| s.column(j).iter().sum::<f64>() / n as f64).collect();
        let mut cov = vec![vec![0.0; d]; d];
        for a in 0..d {
            for b in 0..d {
                cov[a][b] = (0..n)
                    .map(|i| (s.get(i, a) - means[a]) * (s.get(i, b) - means[b]))
                    .sum::<f64>()
                    / (n - 1) as f64;
            }
        }
        let mut gamma = vec![0.0; d];
        gamma[r] = 1.0;
        gamma[k] = -1.0;
        let mut q = 0.0;
        for a in 0..d {
            for b in 0..d {
                q += gamma[a] * cov[a][b] * gamma[b];
            }
        }
        q
    }

    #[test]
    fn column_means_examples() {
        let s = sample(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(column_means(s.view()).unwrap().means, vec![2.0, 3.0]);
        let s = sample(&[&[5.0, 7.0, 9.0]]);
        let stats = column_means(s.view()).unwrap();
        assert_eq!(stats.means, vec![5.0, 7.0, 9.0]);
        assert_eq!(stats.count, 1);
        let s = sample(&[&[0.0, 1.0], &[0.0, -1.0], &[0.0, 0.0]]);
        assert_eq!(column_means(s.view()).unwrap().means, vec![0.0, 0.0]);
        let ids: [usize; 0] = [];
        assert!(matches!(column_means(s.subset(&ids)), Err(Error::Domain(_))));
    }

    #[test]
    fn contrast_variance_examples() {
        let s = sample(&[&[1.0, 0.0], &[3.0, 0.0]]);
        let c = ContrastSpec::new(0, 1, 2).unwrap();
        assert_eq!(contrast_variance(s.view(), c).unwrap(), 2.0);

        let s = sample(&[&[2.5, 1.5], &[-1.0, -2.0], &[7.0, 6.0]]);
        assert_eq!(contrast_variance(s.view(), c).unwrap(), 0.0);

        let s = sample(&[&[2.0, 1.0], &[3.0, 1.0], &[2.0, 2.0], &[3.0, 0.0]]);
        let v = contrast_variance(s.view(), c).unwrap();
        assert!((v - 5.0 / 3.0).abs() < 1e-15);

        let s = sample(&[&[2.0, 1.0]]);
        assert!(matches!(contrast_variance(s.view(), c), Err(Error::Domain(_))));
    }

    #[test]
    fn contrast_spec_validation() {
        assert!(ContrastSpec::new(1, 1, 3).is_err());
        assert!(ContrastSpec::new(0, 3, 3).is_err());
        assert_eq!(ContrastSpec::new(2, 0, 3).unwrap().flipped().target(), 0);
    }

    #[test]
    fn mom_examples() {
        let v = [1.0, 3.0, 10.0, 2.0, 4.0, 4.0];
        assert_eq!(mom_estimate(&v, 3).unwrap(), 4.0);
        assert_eq!(mom_estimate(&v, 1).unwrap(), v.iter().sum::<f64>() / 6.0);
        assert_eq!(mom_estimate(&[2.5; 7], 3).unwrap(), 2.5);
        assert!(mom_estimate(&v, 0).is_err());
        assert!(mom_estimate(&v, 7).is_err());
        // 7 values into 3 blocks: sizes 3, 2, 2.
        let v = [0.0, 0.0, 3.0, 10.0, 10.0, 4.0, 6.0];
        assert_eq!(mom_estimate(&v, 3).unwrap(), 5.0);
    }

    #[test]
    fn column_mom_matches_scalar_mom() {
        let s = sample(&[
            &[1.0, 0.0],
            &[3.0, 5.0],
            &[10.0, -1.0],
            &[2.0, 2.0],
            &[4.0, 8.0],
            &[4.0, 1.0],
            &[0.5, 0.0],
        ]);
        for blocks in 1..=3 {
            let got = column_mom(s.view(), blocks).unwrap();
            for (k, g) in got.iter().enumerate() {
                assert_eq!(*g, mom_estimate(&s.column(k), blocks).unwrap());
            }
        }
    }

    #[test]
    fn mom_block_rules() {
        assert_eq!(MomBlocks::SqrtN.resolve(1500).unwrap(), 38);
        assert!(MomBlocks::Fixed(6).resolve(10).is_err());
        assert_eq!(MomBlocks::Fixed(5).resolve(10).unwrap(), 5);
        // η = 1/2 ∧ (1/100 ∨ e^{-3.5} ∨ e^{-1000/18}) = e^{-3.5} → ⌈3.5⌉ = 4 → V = 18.
        let v = MomBlocks::Theoretical { cn: 3.5, cn_prime: 100.0 }.resolve(1000).unwrap();
        assert_eq!(v, 18);
        // ⌈log(1/η)⌉ = 3 gives the non-integer 13.5, rounded up.
        let v = MomBlocks::Theoretical { cn: 2.5, cn_prime: 100.0 }.resolve(1000).unwrap();
        assert_eq!(v, 14);
    }

    #[test]
    fn catoni_degenerate_and_symmetric() {
        assert_eq!(catoni_estimate(&[3.25; 10], 0.05).unwrap(), 3.25);
        for a in [0.1, 1.0, 17.0, 1e4] {
            let v = [-a, a, -a, a, a, -a, -a, a];
            assert_eq!(catoni_estimate(&v, 0.05).unwrap(), 0.0);
        }
    }

    #[test]
    fn catoni_domain_errors() {
        // n = 4 <= 2 log 20 = 5.99
        assert!(matches!(
            catoni_estimate(&[0.0, 0.0, 0.0, 100.0], 0.05),
            Err(Error::Domain(_))
        ));
        assert!(catoni_estimate(&[1.0, 2.0, 3.0], 1.0).is_err());
        assert!(catoni_estimate(&[1.0], 0.5).is_err());
    }

    // Independent grid scan over θ of the estimating equation.
    fn grid_scan_root(values: &[f64], delta: f64) -> f64 {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let l = (1.0 / delta).ln();
        let eta_sq = 2.0 * var * l / (n as f64 - 2.0 * l);
        let a = (2.0 * l / (n as f64 * (var + eta_sq))).sqrt();
        let g = |t: f64| -> f64 {
            values
                .iter()
                .map(|x| {
                    let u = a * (x - t);
                    u.signum() * (1.0 + u.abs() + u * u / 2.0).ln()
                })
                .sum()
        };
        let (mut lo, mut hi) = (-1000.0, 1000.0);
        for _ in 0..6 {
            let steps = 10_000;
            let h = (hi - lo) / steps as f64;
            let mut prev = lo;
            for i in 1..=steps {
                let t = lo + h * i as f64;
                if g(prev) > 0.0 && g(t) <= 0.0 {
                    lo = prev;
                    hi = t;
                    break;
                }
                prev = t;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn catoni_matches_grid_scan() {
        let v = [0.0, 0.0, 0.0, 100.0];
        let got = catoni_estimate(&v, 0.3).unwrap();
        // Frozen from an offline numpy grid scan of the same equation.
        assert!((got - 24.109_797_594_258_87).abs() < 1e-8, "{got}");
        assert!((got - grid_scan_root(&v, 0.3)).abs() < 1e-8);
        let scale = catoni_scale(4, 2500.0, 0.3);
        assert!(catoni_objective(&v, scale, got).abs() <= 4e-10);
    }

    #[test]
    fn catoni_residual_is_within_tolerance_on_heavy_tailed_data() {
        let v: Vec<f64> = (0..301)
            .map(|i| {
                let u = (i as f64 + 0.5) / 301.0;
                (std::f64::consts::PI * (u - 0.5)).tan()
            })
            .collect();
        let est = catoni_estimate(&v, 0.05).unwrap();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        let scale = catoni_scale(v.len(), var, 0.05);
        assert!(catoni_objective(&v, scale, est).abs() <= 1e-10 * v.len() as f64);
    }

    #[test]
    fn locations_follow_params() {
        let s = sample(&[&[1.0, 0.0], &[3.0, 5.0], &[10.0, -1.0], &[2.0, 2.0]]);
        let mean = column_locations(s.view(), None).unwrap();
        let mom = column_locations(
            s.view(),
            Some(&RobustParams { mom_blocks: MomBlocks::Fixed(1), ..RobustParams::median_of_means() }),
        )
        .unwrap();
        assert_eq!(mean, mom);
    }

    proptest! {
        #[test]
        fn contrast_variance_symmetry_and_quadratic_form(
            data in proptest::collection::vec(-10.0f64..10.0, 20),
            r in 0usize..4,
            k in 0usize..4,
        ) {
            prop_assume!(r != k);
            let s = Sample::new(5, 4, data).unwrap();
            let c = ContrastSpec::new(r, k, 4).unwrap();
            let v = contrast_variance(s.view(), c).unwrap();
            let flipped = contrast_variance(s.view(), c.flipped()).unwrap();
            prop_assert!((v - flipped).abs() <= 1e-12 * v.abs().max(1e-300));
            let q = quadratic_form_oracle(&s, r, k);
            prop_assert!((v - q).abs() <= 1e-12 * q.abs().max(1e-12));
            let (_, all) = contrast_variances(s.view(), r).unwrap();
            prop_assert!((all[k] - q).abs() <= 1e-10 * q.abs().max(1e-10));
            let cov = ContrastCovariance::compute(s.view()).unwrap();
            prop_assert!((cov.variance(r, k) - q).abs() <= 1e-10 * q.abs().max(1e-10));
        }

        #[test]
        fn mom_translation_equivariant(
            values in proptest::collection::vec(-100.0f64..100.0, 1..40),
            shift in -50.0f64..50.0,
            blocks_seed in 0usize..1000,
        ) {
            let blocks = 1 + blocks_seed % values.len();
            let base = mom_estimate(&values, blocks).unwrap();
            let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
            let moved = mom_estimate(&shifted, blocks).unwrap();
            prop_assert!((moved - base - shift).abs() <= 1e-9);
            let one = mom_estimate(&values, 1).unwrap();
            prop_assert_eq!(one, values.iter().sum::<f64>() / values.len() as f64);
        }

        #[test]
        fn catoni_translation_equivariant_and_bracketed(
            values in proptest::collection::vec(-100.0f64..100.0, 8..60),
            shift in -50.0f64..50.0,
        ) {
            let est = catoni_estimate(&values, 0.05).unwrap();
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(est >= lo && est <= hi);
            let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
            let moved = catoni_estimate(&shifted, 0.05).unwrap();
            prop_assert!((moved - est - shift).abs() <= 1e-6);
        }
    }
}
