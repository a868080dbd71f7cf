//! Monte Carlo checks of test validity and set coverage.

use argmin_inference::argmin_test::{bonferroni_test, da_test};
use argmin_inference::confidence_sets::{pointwise_confset, TestProcedure};
use argmin_inference::multi_split::{multisplit_test, resample_threshold, MultiSplitConfig};
use argmin_inference::normal::upper_critical_value;
use argmin_inference::sim::{build_mean, gen_gaussian, CovKind, CovScenario, MeanKind, MeanScenario};
use argmin_inference::selection::SelectorKind;

fn identity(d: usize) -> CovScenario {
    CovScenario::new(CovKind::ToeplitzEqual(0.0), d)
}

fn three_se(p: f64, reps: usize) -> f64 {
    3.0 * (p * (1.0 - p) / reps as f64).sqrt()
}

#[test]
fn single_split_test_keeps_level_under_ties() {
    let reps = 10_000;
    let accepted = (0..reps as u64)
        .filter(|&i| {
            let data = gen_gaussian(&[0.0; 4], &identity(4), 200, 100 + i).unwrap();
            !da_test(data.view(), 2, 0.05, &SelectorKind::adjusted(), i).unwrap().reject
        })
        .count();
    let rate = accepted as f64 / reps as f64;
    assert!((rate - 0.95).abs() <= 0.01, "acceptance rate {rate}");
}

#[test]
fn bonferroni_is_conservative_under_ties_in_high_dimension() {
    let reps = 2000;
    let alphas = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
    let mut rejections = [0usize; 6];
    for i in 0..reps as u64 {
        let data = gen_gaussian(&[0.0; 100], &identity(100), 500, 7000 + i).unwrap();
        for (count, &alpha) in rejections.iter_mut().zip(&alphas) {
            *count += bonferroni_test(data.view(), 0, alpha).unwrap().reject as usize;
        }
    }
    for (count, alpha) in rejections.iter().zip(alphas) {
        let rate = *count as f64 / reps as f64;
        assert!(rate < alpha, "alpha {alpha}: rate {rate}");
    }
}

#[test]
fn multi_split_keeps_level_under_ties() {
    let reps = 2000;
    let selector = SelectorKind::adjusted();
    let rejected = (0..reps as u64)
        .filter(|&i| {
            let data = gen_gaussian(&[0.0; 4], &identity(4), 500, 30_000 + i).unwrap();
            let cfg = MultiSplitConfig::new(selector, i);
            multisplit_test(data.view(), 0, 0.05, &cfg).unwrap().reject
        })
        .count();
    let rate = rejected as f64 / reps as f64;
    assert!(rate <= 0.06, "rejection rate {rate}");
}

#[test]
fn one_split_threshold_approaches_the_normal_quantile() {
    let z = upper_critical_value(0.05).unwrap();
    for i in 0..3 {
        let data = gen_gaussian(&[0.0; 4], &identity(4), 2000, 500 + i).unwrap();
        let cfg = MultiSplitConfig { splits: 1, resamples: 4000, ..MultiSplitConfig::new(SelectorKind::plugin(), i) };
        let t = resample_threshold(data.view(), 1, 0.05, &cfg).unwrap();
        assert!((t - z).abs() <= 0.1, "threshold {t} vs {z}");
    }
}

#[test]
fn pointwise_sets_cover_each_tied_index() {
    let reps = 2000;
    let mut covered = [0usize; 4];
    let procedure = TestProcedure::SingleSplit(SelectorKind::plugin());
    for i in 0..reps as u64 {
        let data = gen_gaussian(&[0.0; 4], &identity(4), 300, 50_000 + i).unwrap();
        let set = pointwise_confset(data.view(), 0.05, &procedure, i).unwrap();
        for (k, c) in covered.iter_mut().enumerate() {
            *c += set.contains(k) as usize;
        }
    }
    for c in covered {
        assert!(c as f64 / reps as f64 >= 0.94, "coverage {}", c as f64 / reps as f64);
    }
}

#[test]
fn pointwise_set_keeps_the_first_index_under_the_c0_null() {
    let reps = 2000;
    let mu = build_mean(&MeanScenario::new(MeanKind::C0, 100)).unwrap();
    let procedure = TestProcedure::SingleSplit(SelectorKind::plugin());
    let kept = (0..reps as u64)
        .filter(|&i| {
            let data = gen_gaussian(&mu, &identity(100), 1000, 80_000 + i).unwrap();
            pointwise_confset(data.view(), 0.05, &procedure, i).unwrap().contains(0)
        })
        .count();
    let rate = kept as f64 / reps as f64;
    let target = 1.0 - 0.053;
    assert!((rate - target).abs() <= three_se(target, reps), "coverage {rate}");
}
