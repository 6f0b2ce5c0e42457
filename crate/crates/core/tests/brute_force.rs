mod common;

use ollga::algorithms::{run_dyn, DynConfig, TraceOptions};
use ollga::analysis::significance::ks_two_sample;
use ollga::rng::{derive_seed, RandomSource};

use common::{reference_dyn, rls_expected_time};

fn samples(cfg: &DynConfig, n: usize, runs: u64) -> (Vec<f64>, Vec<f64>) {
    let fast = (0..runs)
        .map(|i| {
            run_dyn(
                cfg,
                n,
                10_000,
                &mut RandomSource::new(derive_seed(11, i)),
                TraceOptions::NONE,
            )
            .unwrap()
            .evaluations as f64
        })
        .collect();
    let slow = (0..runs)
        .map(|i| {
            reference_dyn(cfg, n, 10_000, &mut RandomSource::new(derive_seed(12, i))).evaluations
                as f64
        })
        .collect();
    (fast, slow)
}

#[test]
fn sparse_engine_matches_reference_in_distribution() {
    for cfg in [
        DynConfig::default_rule(),
        DynConfig::new(0.45, 1.6, 1.0, 1.16, 0.7).unwrap(),
    ] {
        for n in [4usize, 12, 40] {
            let (a, b) = samples(&cfg, n, 4000);
            let (d, p) = ks_two_sample(&a, &b).unwrap();
            assert!(p > 0.001, "n={n} cfg={cfg:?}: D={d} p={p}");
        }
    }
}

#[test]
fn reference_respects_budget() {
    let cfg = DynConfig::default_rule();
    for budget in [1u64, 5, 33] {
        let r = reference_dyn(&cfg, 300, budget, &mut RandomSource::new(budget));
        assert_eq!(r.evaluations, budget);
        assert!(!r.success);
    }
}

#[test]
fn rls_oracle_small_cases() {
    // n = 1: start optimal w.p. 1/2, otherwise one more evaluation.
    assert!((rls_expected_time(1) - 1.5).abs() < 1e-12);
    // n = 2: 1 + (1/4)(2 + 1) + (1/2)(2) = 2.75
    assert!((rls_expected_time(2) - 2.75).abs() < 1e-12);
}
