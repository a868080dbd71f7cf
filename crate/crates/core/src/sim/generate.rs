//! Gaussian and multivariate-t₃ data generators.
//!
//! The Toeplitz correlation `ρ^|i-j|` is the covariance of a stationary
//! AR(1) sequence, so `L_R z` is computed by the recursion
//! `y_0 = z_0`, `y_k = ρ y_{k-1} + √(1-ρ²) z_k` in `O(d)` per row instead
//! of `O(d²)`. Scaled designs multiply `y` by the standard deviations. The
//! unequal design, whose covariance is `R` plus a diagonal, adds an
//! independent normal with the extra variance to each coordinate.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::scenario::{CovKind, CovScenario};
use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::seeds::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Gaussian,
    /// `μ + L Z / √(U/3)` with one `U ~ χ²₃` per row.
    StudentT3,
}

/// Draws rows `μ + L Z` (optionally scale-mixed) for a fixed design.
#[derive(Debug, Clone)]
pub struct Generator {
    mu: Vec<f64>,
    scale: Vec<f64>,
    /// Standard deviations of the independent additive noise, if any.
    extra: Option<Vec<f64>>,
    rho: f64,
    innovation: f64,
}

impl Generator {
    pub fn new(mu: Vec<f64>, cov: &CovScenario) -> Result<Self> {
        cov.validate()?;
        if mu.len() != cov.d {
            return Err(Error::domain(format!(
                "mean has length {} but covariance has d = {}",
                mu.len(),
                cov.d
            )));
        }
        let rho = cov.rho();
        let variances = cov.variances();
        let (scale, extra) = match cov.kind {
            CovKind::ToeplitzUnequal(_) => (
                vec![1.0; cov.d],
                Some(variances.iter().map(|v| (v - 1.0).max(0.0).sqrt()).collect()),
            ),
            _ => (variances.iter().map(|v| v.sqrt()).collect(), None),
        };
        Ok(Self { mu, scale, extra, rho, innovation: (1.0 - rho * rho).sqrt() })
    }

    pub fn d(&self) -> usize {
        self.mu.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mu
    }

    /// Maps standard normal `z` (and `w` for the additive noise) to a
    /// centered draw in place.
    fn transform(&self, z: &mut [f64], w: &[f64]) {
        let mut prev = 0.0;
        for (k, (v, s)) in z.iter_mut().zip(&self.scale).enumerate() {
            let y = if k == 0 { *v } else { self.rho * prev + self.innovation * *v };
            prev = y;
            *v = s * y;
        }
        if let Some(extra) = &self.extra {
            for ((v, e), w) in z.iter_mut().zip(extra).zip(w) {
                *v += e * w;
            }
        }
    }

    pub fn sample<R: Rng>(&self, rows: usize, family: Family, rng: &mut R) -> Result<Sample> {
        let d = self.d();
        let chi = ChiSquared::<f64>::new(3.0).map_err(|e| Error::Numeric(e.to_string()))?;
        let mut data = vec![0.0; rows * d];
        let mut w = vec![0.0; if self.extra.is_some() { d } else { 0 }];
        for row in data.chunks_exact_mut(d) {
            for v in row.iter_mut().chain(w.iter_mut()) {
                *v = StandardNormal.sample(rng);
            }
            self.transform(row, &w);
            let scale = match family {
                Family::Gaussian => 1.0,
                Family::StudentT3 => 1.0 / (chi.sample(rng) / 3.0).sqrt(),
            };
            for (v, m) in row.iter_mut().zip(&self.mu) {
                *v = m + scale * *v;
            }
        }
        Sample::new(rows, d, data)
    }
}

pub fn gen_gaussian(mu: &[f64], cov: &CovScenario, rows: usize, seed: u64) -> Result<Sample> {
    Generator::new(mu.to_vec(), cov)?.sample(rows, Family::Gaussian, &mut rng_from_seed(seed))
}

pub fn gen_student_t3(mu: &[f64], cov: &CovScenario, rows: usize, seed: u64) -> Result<Sample> {
    Generator::new(mu.to_vec(), cov)?.sample(rows, Family::StudentT3, &mut rng_from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::column_means;
    use crate::sim::scenario::{toeplitz_cholesky, CovKind};

    // Columns of the linear map (z, w) -> x, recovered by feeding unit vectors.
    fn linear_map(g: &Generator, d: usize) -> Vec<Vec<f64>> {
        (0..2 * d)
            .map(|j| {
                let mut z = vec![0.0; d];
                let mut w = vec![0.0; d];
                if j < d { z[j] = 1.0 } else { w[j - d] = 1.0 }
                g.transform(&mut z, &w);
                z
            })
            .collect()
    }

    #[test]
    fn transform_reproduces_the_covariance() {
        let d = 40;
        for kind in [
            CovKind::ToeplitzEqual(0.8),
            CovKind::ToeplitzScaled(-0.4),
            CovKind::ToeplitzUnequal(0.8),
            CovKind::DiagonalHighDim,
        ] {
            let cov = CovScenario::new(kind, d);
            let g = Generator::new(vec![0.0; d], &cov).unwrap();
            let cols = linear_map(&g, d);
            let sigma = cov.matrix();
            for i in 0..d {
                for j in 0..d {
                    let aat: f64 = cols.iter().map(|c| c[i] * c[j]).sum();
                    assert!((aat - sigma[i * d + j]).abs() < 1e-12, "{kind:?} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn scaled_transform_is_the_cholesky_product() {
        let cov = CovScenario::new(CovKind::ToeplitzScaled(0.6), 30);
        let g = Generator::new(vec![0.0; 30], &cov).unwrap();
        let l = toeplitz_cholesky(0.6, 30, &cov.variances()).unwrap();
        let cols = linear_map(&g, 30);
        for i in 0..30 {
            for j in 0..30 {
                assert!((cols[j][i] - l[i * 30 + j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_moments() {
        let rows = 20_000;
        let cov = CovScenario::new(CovKind::ToeplitzEqual(0.4), 3);
        let s = gen_gaussian(&[0.0; 3], &cov, rows, 5).unwrap();
        let means = column_means(s.view()).unwrap().means;
        let se = 1.0 / (rows as f64).sqrt();
        assert!(means.iter().all(|m| m.abs() < 4.0 * se));
        let (c0, c1) = (s.column(0), s.column(1));
        let corr = c0.iter().zip(&c1).map(|(a, b)| a * b).sum::<f64>() / rows as f64;
        // Var of the product of two unit normals with correlation ρ is 1 + ρ².
        assert!((corr - 0.4).abs() < 4.0 * (1.16f64 / rows as f64).sqrt());
        assert_eq!(s, gen_gaussian(&[0.0; 3], &cov, rows, 5).unwrap());
    }

    #[test]
    fn unequal_variances() {
        let rows = 20_000;
        let cov = CovScenario::new(CovKind::ToeplitzUnequal(0.8), 4);
        let s = gen_gaussian(&[0.0; 4], &cov, rows, 6).unwrap();
        let c0 = s.column(0);
        let cov03 = c0.iter().zip(s.column(3)).map(|(a, b)| a * b).sum::<f64>() / rows as f64;
        assert!((cov03 - 0.512).abs() < 4.0 * (21.3f64 / rows as f64).sqrt());
        let var = s.column(2).iter().map(|x| x * x).sum::<f64>() / rows as f64;
        // Var of the sample variance of N(0, 20) is 2·20².
        assert!((var - 20.0).abs() < 4.0 * (800.0f64 / rows as f64).sqrt());
    }

    #[test]
    fn t3_location_and_tails() {
        let rows = 20_001;
        let mu = [1.0, -2.0];
        let cov = CovScenario::new(CovKind::ToeplitzEqual(0.0), 2);
        let s = gen_student_t3(&mu, &cov, rows, 7).unwrap();
        for (k, m) in mu.iter().enumerate() {
            let mut col = s.column(k);
            col.sort_by(f64::total_cmp);
            assert!((col[rows / 2] - m).abs() < 0.05);
        }
        let col = s.column(0);
        let m2 = col.iter().map(|x| (x - 1.0).powi(2)).sum::<f64>() / rows as f64;
        let m4 = col.iter().map(|x| (x - 1.0).powi(4)).sum::<f64>() / rows as f64;
        assert!(m4 / (m2 * m2) > 3.0);
        assert_eq!(s, gen_student_t3(&mu, &cov, rows, 7).unwrap());
    }
}
