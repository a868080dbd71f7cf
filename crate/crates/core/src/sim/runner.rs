//! Monte Carlo replication of tests, confidence sets and intervals.
//!
//! Replication `i` draws its data from `derive_seed(seed, DATA, i)` and runs
//! every method with the same `derive_seed(seed, METHOD, i)`, so methods are
//! compared on common random numbers (same data, same split).

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{Family, Generator};
use super::scenario::{build_mean, CovScenario, MeanScenario};
use crate::argmin_test::{bonferroni_test, da_test};
use crate::confidence_sets::{
    mcs_one_step, mcs_two_step, pointwise_confset, smallest_mean_c1, smallest_mean_c2,
    TestProcedure,
};
use crate::error::{Error, Result};
use crate::multi_split::{multisplit_test, MultiSplitConfig};
use crate::sample::Sample;
use crate::seeds::{derive_seed, rng_from_seed, stream};
use crate::selection::SelectorKind;

/// One simulation design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub mean: MeanScenario,
    pub cov: CovScenario,
    pub family: Family,
    pub n_total: usize,
    /// Every method is evaluated at each level on the same replications.
    pub alphas: Vec<f64>,
}

/// A procedure evaluated in each replication. Tests are of `H0: index 0 is
/// an argmin`; sets are scored by whether they contain the whole argmin
/// set, intervals by whether they contain the smallest mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Test(TestProcedure),
    Pointwise(TestProcedure),
    McsOneStep(SelectorKind),
    McsTwoStep(SelectorKind),
    SmallestMeanC1,
    SmallestMeanC2,
}

impl Method {
    pub fn da(selector: SelectorKind) -> Self {
        Method::Test(TestProcedure::SingleSplit(selector))
    }

    pub fn label(&self) -> String {
        let procedure = |p: &TestProcedure| match p {
            TestProcedure::SingleSplit(s) => format!("DA-{}", s.label()),
            TestProcedure::MultiSplit(c) => format!("DA-{}x{}", c.selector.label(), c.splits),
            TestProcedure::Bonferroni => "Bonferroni".to_string(),
        };
        match self {
            Method::Test(p) => procedure(p),
            Method::Pointwise(p) => format!("pointwise-{}", procedure(p)),
            Method::McsOneStep(s) => format!("DA-MCS-{}-1", s.label()),
            Method::McsTwoStep(s) => format!("DA-MCS-{}-2", s.label()),
            Method::SmallestMeanC1 => "C1".to_string(),
            Method::SmallestMeanC2 => "C2".to_string(),
        }
    }
}

/// Aggregate over replications for one (scenario, method, level).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCResult {
    pub scenario: String,
    pub method: String,
    pub alpha: f64,
    /// Rejection rate for tests, coverage rate for sets and intervals.
    pub rate: f64,
    pub se: f64,
    pub avg_size: Option<f64>,
    pub avg_width: Option<f64>,
    pub reps: usize,
    pub wall_ms: f64,
    pub avg_dhat: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Test { reject: bool },
    Set { covered: bool, size: usize },
    Interval { covered: bool, width: f64, d_hat: Option<usize> },
}

impl Outcome {
    fn hit(&self) -> bool {
        match *self {
            Outcome::Test { reject } => reject,
            Outcome::Set { covered, .. } | Outcome::Interval { covered, .. } => covered,
        }
    }
}

struct Truth {
    argmin: Vec<usize>,
    min: f64,
}

fn evaluate(method: &Method, data: &Sample, alpha: f64, seed: u64, truth: &Truth) -> Result<Outcome> {
    let view = data.view();
    let set_outcome = |set: crate::confidence_sets::IndexSet| Outcome::Set {
        covered: truth.argmin.iter().all(|&k| set.contains(k)),
        size: set.len(),
    };
    Ok(match method {
        Method::Test(TestProcedure::SingleSplit(selector)) => {
            Outcome::Test { reject: da_test(view, 0, alpha, selector, seed)?.reject }
        }
        Method::Test(TestProcedure::MultiSplit(cfg)) => {
            let cfg = MultiSplitConfig { seed, ..*cfg };
            Outcome::Test { reject: multisplit_test(view, 0, alpha, &cfg)?.reject }
        }
        Method::Test(TestProcedure::Bonferroni) => {
            Outcome::Test { reject: bonferroni_test(view, 0, alpha)?.reject }
        }
        Method::Pointwise(procedure) => set_outcome(pointwise_confset(view, alpha, procedure, seed)?),
        Method::McsOneStep(selector) => set_outcome(mcs_one_step(view, alpha, selector, seed)?),
        Method::McsTwoStep(selector) => set_outcome(mcs_two_step(view, alpha, selector, seed)?),
        Method::SmallestMeanC1 => {
            let iv = smallest_mean_c1(view, alpha)?;
            Outcome::Interval { covered: iv.contains(truth.min), width: iv.width(), d_hat: None }
        }
        Method::SmallestMeanC2 => {
            let (iv, d_hat) = smallest_mean_c2(view, alpha, seed)?;
            Outcome::Interval { covered: iv.contains(truth.min), width: iv.width(), d_hat: Some(d_hat) }
        }
    })
}

/// Runs `reps` replications of `scenario`, evaluating every method at every
/// level of the scenario on each replication. Results are ordered by method,
/// then level, and do not depend on the number of worker threads.
pub fn run_monte_carlo(
    scenario: &Scenario,
    methods: &[Method],
    reps: usize,
    seed: u64,
) -> Result<Vec<MCResult>> {
    if reps < 1 {
        return Err(Error::domain("at least one replication is required"));
    }
    if scenario.alphas.is_empty() {
        return Err(Error::domain("scenario has no significance levels"));
    }
    let mu = build_mean(&scenario.mean)?;
    let generator = Generator::new(mu.clone(), &scenario.cov)?;
    let min = mu.iter().copied().fold(f64::INFINITY, f64::min);
    let truth = Truth { argmin: (0..mu.len()).filter(|&k| mu[k] == min).collect(), min };

    let per_rep: Vec<Vec<(Outcome, u128)>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let data_seed = derive_seed(seed, stream::DATA, rep as u64);
            let method_seed = derive_seed(seed, stream::METHOD, rep as u64);
            let wrap = |e: Error| Error::Replication { rep, seed: data_seed, source: Box::new(e) };
            let data = generator
                .sample(scenario.n_total, scenario.family, &mut rng_from_seed(data_seed))
                .map_err(wrap)?;
            let mut out = Vec::with_capacity(methods.len() * scenario.alphas.len());
            for method in methods {
                for &alpha in &scenario.alphas {
                    let start = Instant::now();
                    let outcome = evaluate(method, &data, alpha, method_seed, &truth).map_err(wrap)?;
                    out.push((outcome, start.elapsed().as_nanos()));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut results = Vec::new();
    for (m, method) in methods.iter().enumerate() {
        for (a, &alpha) in scenario.alphas.iter().enumerate() {
            let slot = m * scenario.alphas.len() + a;
            let outcomes = per_rep.iter().map(|rep| rep[slot].0);
            let hits = outcomes.clone().filter(Outcome::hit).count();
            let rate = hits as f64 / reps as f64;
            let mean_of = |values: Vec<f64>| {
                (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
            };
            let sizes = outcomes.clone().filter_map(|o| match o {
                Outcome::Set { size, .. } => Some(size as f64),
                _ => None,
            });
            let widths = outcomes.clone().filter_map(|o| match o {
                Outcome::Interval { width, .. } => Some(width),
                _ => None,
            });
            let d_hats = outcomes.filter_map(|o| match o {
                Outcome::Interval { d_hat, .. } => d_hat.map(|v| v as f64),
                _ => None,
            });
            let nanos: u128 = per_rep.iter().map(|rep| rep[slot].1).sum();
            results.push(MCResult {
                scenario: scenario.id.clone(),
                method: method.label(),
                alpha,
                rate,
                se: (rate * (1.0 - rate) / reps as f64).sqrt(),
                avg_size: mean_of(sizes.collect()),
                avg_width: mean_of(widths.collect()),
                reps,
                wall_ms: nanos as f64 / 1e6,
                avg_dhat: mean_of(d_hats.collect()),
            });
        }
    }
    Ok(results)
}
