//! Properties of the Monte Carlo harness on reduced designs.

use argmin_inference::sim::{
    run_monte_carlo, CovKind, CovScenario, Family, MCResult, MeanKind, MeanScenario, Method, Scenario,
};
use argmin_inference::selection::SelectorKind;

fn scenario(mean: MeanKind, cov: CovKind, d: usize, n_total: usize) -> Scenario {
    Scenario {
        id: format!("{mean:?}/{cov:?}"),
        mean: MeanScenario::new(mean, d),
        cov: CovScenario::new(cov, d),
        family: Family::Gaussian,
        n_total,
        alphas: vec![0.05],
    }
}

#[test]
fn power_grows_with_the_signal() {
    let reps = 1000;
    let adj = [Method::da(SelectorKind::adjusted())];
    let rate = |mu1| {
        let s = scenario(MeanKind::HighDimAlt { mu1 }, CovKind::DiagonalHighDim, 150, 500);
        run_monte_carlo(&s, &adj, reps, 5).unwrap()[0].clone()
    };
    let (weak, strong) = (rate(0.15), rate(0.3));
    assert!(strong.rate + 3.0 * strong.se >= weak.rate, "{} vs {}", strong.rate, weak.rate);
    assert!(strong.rate > weak.rate);
}

#[test]
fn single_split_tests_control_size_on_every_null() {
    let reps = 1000;
    let methods = [Method::da(SelectorKind::plugin()), Method::da(SelectorKind::adjusted())];
    let bound = 0.05 + 3.0 * (0.05f64 * 0.95 / reps as f64).sqrt();
    for mean in [MeanKind::A0, MeanKind::B0, MeanKind::C0] {
        for rho in [0.0, 0.4, 0.8] {
            for cov in [CovKind::ToeplitzEqual(rho), CovKind::ToeplitzUnequal(rho)] {
                let s = scenario(mean, cov, 100, 1000);
                for r in run_monte_carlo(&s, &methods, reps, 17).unwrap() {
                    assert!(r.rate <= bound, "{} {}: size {}", s.id, r.method, r.rate);
                }
            }
        }
    }
}

#[test]
fn results_do_not_depend_on_the_thread_count() {
    let s = scenario(MeanKind::B, CovKind::ToeplitzUnequal(0.4), 30, 200);
    let methods = [
        Method::da(SelectorKind::plugin()),
        Method::McsOneStep(SelectorKind::adjusted()),
        Method::SmallestMeanC2,
    ];
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let results = pool.install(|| run_monte_carlo(&s, &methods, 40, 3).unwrap());
        results.into_iter().map(|r| MCResult { wall_ms: 0.0, ..r }).collect::<Vec<_>>()
    };
    assert_eq!(run(1), run(3));
}
