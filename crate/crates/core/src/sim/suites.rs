//! Named collections of simulation designs.
//!
//! Each suite expands into scenarios paired with the methods compared on
//! them. Desk-scale runs use at most 2000 replications per scenario; full
//! runs use the replication counts of the original study.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::generate::Family;
use super::runner::{run_monte_carlo, MCResult, Method, Scenario};
use super::scenario::{CovKind, CovScenario, MeanKind, MeanScenario};
use crate::confidence_sets::TestProcedure;
use crate::error::{Error, Result};
use crate::estimators::RobustParams;
use crate::multi_split::MultiSplitConfig;
use crate::seeds::{derive_seed, stream};
use crate::selection::SelectorKind;

/// Desk-scale cap on replications per scenario.
pub const DESK_REPS: usize = 2000;

const RHOS: [f64; 3] = [0.0, 0.4, 0.8];
const THETA_SIZES: [usize; 5] = [2, 5, 10, 15, 20];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Type1,
    PowerEqual,
    PowerUnequal,
    Highdim,
    McsCoverage,
    Minmean,
    Robust,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Type1,
        Suite::PowerEqual,
        Suite::PowerUnequal,
        Suite::Highdim,
        Suite::McsCoverage,
        Suite::Minmean,
        Suite::Robust,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Type1 => "type1",
            Suite::PowerEqual => "power-equal",
            Suite::PowerUnequal => "power-unequal",
            Suite::Highdim => "highdim",
            Suite::McsCoverage => "mcs-coverage",
            Suite::Minmean => "minmean",
            Suite::Robust => "robust",
        }
    }

    /// Replications per scenario in the original study.
    pub fn full_reps(&self) -> usize {
        match self {
            Suite::Type1 | Suite::Highdim | Suite::McsCoverage => 10_000,
            Suite::PowerEqual | Suite::PowerUnequal | Suite::Robust => 5000,
            Suite::Minmean => 1000,
        }
    }

    pub fn desk_reps(&self) -> usize {
        self.full_reps().min(DESK_REPS)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}'")))
    }
}

/// One scenario of a suite and the methods run on it.
#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub scenario: Scenario,
    pub methods: Vec<Method>,
}

fn scenario(id: String, mean: MeanKind, cov: CovKind, d: usize, n_total: usize, alphas: &[f64]) -> Scenario {
    Scenario {
        id,
        mean: MeanScenario::new(mean, d),
        cov: CovScenario::new(cov, d),
        family: Family::Gaussian,
        n_total,
        alphas: alphas.to_vec(),
    }
}

fn mean_tag(kind: MeanKind) -> &'static str {
    match kind {
        MeanKind::A => "a",
        MeanKind::B => "b",
        MeanKind::C => "c",
        MeanKind::A0 => "a0",
        MeanKind::B0 => "b0",
        MeanKind::C0 => "c0",
        _ => "other",
    }
}

fn single_split_tests() -> Vec<Method> {
    vec![
        Method::da(SelectorKind::plugin()),
        Method::da(SelectorKind::adjusted()),
        Method::Test(TestProcedure::Bonferroni),
    ]
}

fn power_methods() -> Vec<Method> {
    let multi = |selector| Method::Test(TestProcedure::MultiSplit(MultiSplitConfig::new(selector, 0)));
    vec![
        Method::da(SelectorKind::plugin()),
        Method::da(SelectorKind::adjusted()),
        multi(SelectorKind::plugin()),
        multi(SelectorKind::adjusted()),
        Method::Test(TestProcedure::Bonferroni),
    ]
}

fn robust_methods() -> Vec<Method> {
    let mut methods = Vec::new();
    for base in [SelectorKind::plugin(), SelectorKind::adjusted()] {
        methods.push(Method::da(base));
        methods.push(Method::da(base.with_robust(RobustParams::median_of_means())));
        methods.push(Method::da(base.with_robust(RobustParams::catoni())));
    }
    methods
}

const MEAN_KINDS: [MeanKind; 6] =
    [MeanKind::A, MeanKind::B, MeanKind::C, MeanKind::A0, MeanKind::B0, MeanKind::C0];

/// Alternatives and their matched nulls over the correlation grid.
fn mean_grid(prefix: &str, cov: fn(f64) -> CovKind, n_total: usize, methods: fn() -> Vec<Method>) -> Vec<SuiteEntry> {
    let mut entries = Vec::new();
    for kind in MEAN_KINDS {
        for rho in RHOS {
            let id = format!("{prefix}-{}-rho{rho}", mean_tag(kind));
            entries.push(SuiteEntry {
                scenario: scenario(id, kind, cov(rho), 100, n_total, &[0.05]),
                methods: methods(),
            });
        }
    }
    entries
}

/// The scenarios and methods of `suite`.
pub fn suite_entries(suite: Suite) -> Vec<SuiteEntry> {
    match suite {
        Suite::Type1 => {
            let mut alphas = vec![0.01];
            alphas.extend((1..=10).map(|i| 0.05 * i as f64));
            let mut entries = Vec::new();
            for (d, kind) in [(4, MeanKind::TypeINull4), (100, MeanKind::TypeINull100)] {
                for n_total in [500, 2000, 5000] {
                    let id = format!("type1-d{d}-n{n_total}");
                    entries.push(SuiteEntry {
                        scenario: scenario(id, kind, CovKind::ToeplitzEqual(0.0), d, n_total, &alphas),
                        methods: single_split_tests(),
                    });
                }
            }
            entries
        }
        Suite::PowerEqual => mean_grid("equal", CovKind::ToeplitzEqual, 1000, power_methods),
        Suite::PowerUnequal => mean_grid("unequal", CovKind::ToeplitzUnequal, 1000, power_methods),
        Suite::Highdim => {
            let mut entries = Vec::new();
            for d in [10, 150, 300, 500, 1000] {
                for (tag, kind) in [("null", MeanKind::HighDimNull), ("alt", MeanKind::HighDimAlt { mu1: 0.15 })] {
                    entries.push(SuiteEntry {
                        scenario: scenario(format!("highdim-d{d}-{tag}"), kind, CovKind::DiagonalHighDim, d, 500, &[0.05]),
                        methods: single_split_tests(),
                    });
                }
            }
            entries
        }
        Suite::McsCoverage => {
            let n_total = 1000;
            let mut entries = Vec::new();
            for theta_size in THETA_SIZES {
                let zeta = 10.0 * ((theta_size as f64).ln() / n_total as f64).sqrt();
                for rho in RHOS {
                    let mut methods = Vec::new();
                    for selector in [SelectorKind::plugin(), SelectorKind::adjusted()] {
                        methods.push(Method::Pointwise(TestProcedure::SingleSplit(selector)));
                        methods.push(Method::McsOneStep(selector));
                        methods.push(Method::McsTwoStep(selector));
                    }
                    let id = format!("mcs-theta{theta_size}-rho{rho}");
                    let mean = MeanKind::McsGap { zeta, theta_size };
                    entries.push(SuiteEntry {
                        scenario: scenario(id, mean, CovKind::ToeplitzEqual(rho), 100, n_total, &[0.05]),
                        methods,
                    });
                }
            }
            entries
        }
        Suite::Minmean => {
            let mut entries = Vec::new();
            for theta_size in THETA_SIZES {
                for rho in RHOS {
                    let id = format!("minmean-theta{theta_size}-rho{rho}");
                    let mean = MeanKind::McsGap { zeta: 1.0, theta_size };
                    entries.push(SuiteEntry {
                        scenario: scenario(id, mean, CovKind::ToeplitzEqual(rho), 1000, 2000, &[0.05]),
                        methods: vec![Method::SmallestMeanC1, Method::SmallestMeanC2],
                    });
                }
            }
            entries
        }
        Suite::Robust => {
            let mut entries = mean_grid("robust-equal", CovKind::ToeplitzEqual, 3000, robust_methods);
            entries.extend(mean_grid("robust-unequal", CovKind::ToeplitzUnequal, 3000, robust_methods));
            for entry in &mut entries {
                entry.scenario.family = Family::StudentT3;
            }
            entries
        }
    }
}

/// Runs every scenario of `suite`. Scenario `i` uses the seed
/// `derive_seed(seed, SCENARIO, i)`. `reps` overrides the suite default,
/// which is the full count when `full` is set and the desk count otherwise.
pub fn run_suite(suite: Suite, reps: Option<usize>, full: bool, seed: u64) -> Result<Vec<MCResult>> {
    let reps = reps.unwrap_or(if full { suite.full_reps() } else { suite.desk_reps() });
    let mut results = Vec::new();
    for (i, entry) in suite_entries(suite).iter().enumerate() {
        let scenario_seed = derive_seed(seed, stream::SCENARIO, i as u64);
        results.extend(run_monte_carlo(&entry.scenario, &entry.methods, reps, scenario_seed)?);
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::scenario::build_mean;

    #[test]
    fn names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("power".parse::<Suite>().is_err());
    }

    #[test]
    fn every_scenario_is_well_formed() {
        for suite in Suite::ALL {
            let entries = suite_entries(suite);
            assert!(!entries.is_empty());
            let mut ids: Vec<&str> = entries.iter().map(|e| e.scenario.id.as_str()).collect();
            ids.sort_unstable();
            ids.dedup();
            assert_eq!(ids.len(), entries.len(), "{suite}: duplicate scenario ids");
            for entry in &entries {
                let s = &entry.scenario;
                assert_eq!(build_mean(&s.mean).unwrap().len(), s.mean.d);
                s.cov.validate().unwrap();
                assert!(!entry.methods.is_empty());
            }
        }
    }

    #[test]
    fn desk_reps_are_capped() {
        assert_eq!(Suite::Type1.desk_reps(), DESK_REPS);
        assert_eq!(Suite::Minmean.desk_reps(), 1000);
        assert_eq!(Suite::PowerEqual.full_reps(), 5000);
    }
}
