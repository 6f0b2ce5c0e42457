use ollga::algorithms::{Algorithm, DynConfig, TraceOptions};
use ollga::experiment::{mean_successful, run_batch};
use ollga::tuning::{
    race_tune, AlgorithmTarget, Family, Param, ParamSpace, SyntheticTarget, TunerSettings,
};

#[test]
fn finds_the_synthetic_optimum_in_three_dimensions() {
    let space = ParamSpace::new(vec![
        Param::real("x", 0.0, 1.0),
        Param::real("y", -2.0, 2.0),
        Param::integer("k", 1, 50),
    ])
    .unwrap();
    let target = SyntheticTarget {
        optimum: vec![0.8, -1.0, 20.0],
        widths: vec![0.3, 1.2, 15.0],
        scale: 1000.0,
        noise: 0.2,
        run_budget: 20_000.0,
    };
    let mut hits = 0;
    for rep in 0..10 {
        let out = race_tune(&space, &target, 4_000_000, rep, &TunerSettings::default()).unwrap();
        let close = space
            .params
            .iter()
            .zip(&out.best.values)
            .zip(&target.optimum)
            .all(|((p, v), o)| (v - o).abs() <= 0.1 * p.range());
        hits += close as usize;
    }
    assert!(hits >= 9, "{hits}/10");
}

#[test]
fn budget_holds_on_a_real_target() {
    let space = ParamSpace::dyn_update_strengths();
    let target =
        AlgorithmTarget::new(Family::Dyn(DynConfig::default_rule()), &space, 100, 10_000).unwrap();
    for budget in [50_000u64, 300_000] {
        let out = race_tune(&space, &target, budget, 2, &TunerSettings::default()).unwrap();
        let spent: u64 = out.audit.iter().map(|a| a.evaluations).sum();
        assert_eq!(spent, out.consumed);
        assert!(spent <= budget);
    }
}

#[test]
fn five_parameter_tuning_beats_the_default() {
    let space = ParamSpace::dyn_full();
    let target = AlgorithmTarget::new(
        Family::Dyn(DynConfig::default_rule()),
        &space,
        1000,
        150_000,
    )
    .unwrap();
    let out = race_tune(&space, &target, 50_000_000, 1, &TunerSettings::default()).unwrap();
    assert!(!out.warning);
    let tuned = run_batch(
        &target.algorithm(&out.best.values).unwrap(),
        1000,
        150_000,
        500,
        99,
        TraceOptions::NONE,
    )
    .unwrap();
    let default = run_batch(
        &Algorithm::Dyn(DynConfig::default_rule()),
        1000,
        150_000,
        500,
        99,
        TraceOptions::NONE,
    )
    .unwrap();
    let (t, d) = (
        mean_successful(&tuned).unwrap(),
        mean_successful(&default).unwrap(),
    );
    assert!(t <= 0.92 * d, "tuned {t} vs default {d}");
}
