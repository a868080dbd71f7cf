//! Mean vectors and covariance structures of the simulation designs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeanKind {
    /// `(0.1, 0, 0.1, …, 0.1)`.
    A,
    /// `μ_1 = 0.2`, `μ_k = 0.1 + 0.9 (k - 2)/(d - 2)` for `k ≥ 2` (one-based).
    B,
    /// `(0.05, 0, 0, 0, 10, …, 10)`.
    C,
    /// `A`, `B`, `C` with the first entry lowered to the minimum.
    A0,
    B0,
    C0,
    /// `(0, 0, 0, 0)`; requires `d = 4`.
    TypeINull4,
    /// `(0, 0, 0, 0, 10, …, 10)`.
    TypeINull100,
    /// `(0, 0, 1, …, 1)`.
    HighDimNull,
    /// `(μ_1, 0, 1, …, 1)`.
    HighDimAlt { mu1: f64 },
    /// `theta_size` zeros followed by `zeta`.
    McsGap { zeta: f64, theta_size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanScenario {
    pub kind: MeanKind,
    pub d: usize,
}

impl MeanScenario {
    pub fn new(kind: MeanKind, d: usize) -> Self {
        Self { kind, d }
    }
}

fn lower_first_to_min(mut mu: Vec<f64>) -> Vec<f64> {
    mu[0] = mu.iter().copied().fold(f64::INFINITY, f64::min);
    mu
}

pub fn build_mean(scn: &MeanScenario) -> Result<Vec<f64>> {
    let d = scn.d;
    let need = |min: usize| -> Result<()> {
        if d < min {
            return Err(Error::domain(format!("{:?} needs d >= {min}, got d = {d}", scn.kind)));
        }
        Ok(())
    };
    let mu = match scn.kind {
        MeanKind::A | MeanKind::A0 => {
            need(2)?;
            let mut mu = vec![0.1; d];
            mu[1] = 0.0;
            mu
        }
        MeanKind::B | MeanKind::B0 => {
            need(3)?;
            let mut mu = vec![0.2; d];
            for (k, m) in mu.iter_mut().enumerate().skip(1) {
                *m = 0.1 + (k - 1) as f64 / (d - 2) as f64 * 0.9;
            }
            mu
        }
        MeanKind::C | MeanKind::C0 => {
            need(5)?;
            let mut mu = vec![10.0; d];
            mu[..4].copy_from_slice(&[0.05, 0.0, 0.0, 0.0]);
            mu
        }
        MeanKind::TypeINull4 => {
            if d != 4 {
                return Err(Error::domain(format!("TypeINull4 needs d = 4, got d = {d}")));
            }
            vec![0.0; 4]
        }
        MeanKind::TypeINull100 => {
            need(5)?;
            let mut mu = vec![10.0; d];
            mu[..4].fill(0.0);
            mu
        }
        MeanKind::HighDimNull | MeanKind::HighDimAlt { .. } => {
            need(3)?;
            let mut mu = vec![1.0; d];
            mu[0] = match scn.kind {
                MeanKind::HighDimAlt { mu1 } => mu1,
                _ => 0.0,
            };
            mu[1] = 0.0;
            mu
        }
        MeanKind::McsGap { zeta, theta_size } => {
            if theta_size < 1 || theta_size > d {
                return Err(Error::domain(format!(
                    "argmin set size {theta_size} must lie in [1, {d}]"
                )));
            }
            let mut mu = vec![zeta; d];
            mu[..theta_size].fill(0.0);
            mu
        }
    };
    Ok(match scn.kind {
        MeanKind::A0 | MeanKind::B0 | MeanKind::C0 => lower_first_to_min(mu),
        _ => mu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CovKind {
    /// `Σ_ij = ρ^|i-j|`.
    ToeplitzEqual(f64),
    /// Toeplitz `ρ^|i-j|` with the diagonal replaced by `(1, 1, 20, …, 20)`;
    /// off-diagonal entries are unchanged.
    ToeplitzUnequal(f64),
    /// `D^{1/2} R D^{1/2}` with `R` Toeplitz and `D = diag(1, 1, 20, …, 20)`.
    ToeplitzScaled(f64),
    /// Diagonal with variances `(1, 1, 20, …, 20)`.
    DiagonalHighDim,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovScenario {
    pub kind: CovKind,
    pub d: usize,
}

impl CovScenario {
    pub fn new(kind: CovKind, d: usize) -> Self {
        Self { kind, d }
    }

    pub fn rho(&self) -> f64 {
        match self.kind {
            CovKind::ToeplitzEqual(rho)
            | CovKind::ToeplitzUnequal(rho)
            | CovKind::ToeplitzScaled(rho) => rho,
            CovKind::DiagonalHighDim => 0.0,
        }
    }

    pub fn variances(&self) -> Vec<f64> {
        match self.kind {
            CovKind::ToeplitzEqual(_) => vec![1.0; self.d],
            CovKind::ToeplitzUnequal(_) | CovKind::ToeplitzScaled(_) | CovKind::DiagonalHighDim => {
                (0..self.d).map(|k| if k < 2 { 1.0 } else { 20.0 }).collect()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rho = self.rho();
        if !(rho.abs() < 1.0) {
            return Err(Error::domain(format!("correlation {rho} must satisfy |rho| < 1")));
        }
        if self.d < 1 {
            return Err(Error::domain("covariance needs d >= 1"));
        }
        Ok(())
    }

    /// The dense covariance matrix, row-major.
    pub fn matrix(&self) -> Vec<f64> {
        let d = self.d;
        let rho = self.rho();
        let var = self.variances();
        let scaled = !matches!(self.kind, CovKind::ToeplitzUnequal(_));
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = if i == j {
                    var[i]
                } else if scaled {
                    (var[i] * var[j]).sqrt() * rho.powi((i as i32 - j as i32).abs())
                } else {
                    rho.powi((i as i32 - j as i32).abs())
                };
            }
        }
        m
    }

    /// Lower Cholesky factor of [`matrix`](Self::matrix), row-major.
    pub fn cholesky(&self) -> Result<Vec<f64>> {
        self.validate()?;
        cholesky(&self.matrix(), self.d)
    }
}

fn cholesky(sigma: &[f64], d: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let dot: f64 = (0..j).map(|p| l[i * d + p] * l[j * d + p]).sum();
            if i == j {
                let pivot = sigma[i * d + i] - dot;
                if !(pivot > 0.0) {
                    return Err(Error::Numeric(format!("covariance is not positive definite at {i}")));
                }
                l[i * d + i] = pivot.sqrt();
            } else {
                l[i * d + j] = (sigma[i * d + j] - dot) / l[j * d + j];
            }
        }
    }
    Ok(l)
}

/// Lower Cholesky factor (row-major `d × d`) of `D^{1/2} R D^{1/2}`, with
/// `R_ij = ρ^|i-j|` and `D = diag(diag)`.
pub fn toeplitz_cholesky(rho: f64, d: usize, diag: &[f64]) -> Result<Vec<f64>> {
    if !(rho.abs() < 1.0) {
        return Err(Error::domain(format!("correlation {rho} must satisfy |rho| < 1")));
    }
    if diag.len() != d || diag.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::domain("variances must be positive, one per coordinate"));
    }
    let sd: Vec<f64> = diag.iter().map(|v| v.sqrt()).collect();
    let mut sigma = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            sigma[i * d + j] = sd[i] * sd[j] * rho.powi((i as i32 - j as i32).abs());
        }
    }
    cholesky(&sigma, d)
}
