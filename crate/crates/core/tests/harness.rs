use sais::benchmarks::{self, make_problem};
use sais::harness::{
    ablate, compare, run_experiment, sweep, Algorithm, CurvePadding, ExperimentSpec,
};
use sais::sais::{run_sais_seeded, OperatorMask, SaisConfig};
use sais::sos::{run_sos_seeded, SosConfig};
use sais::Error;

#[test]
fn catalog_has_26_entries_with_stable_indices() {
    let all = benchmarks::list_problems();
    assert_eq!(all.len(), 26);
    for (k, entry) in all.iter().enumerate() {
        assert_eq!(entry.index, k + 1);
        let by_name = make_problem(entry.problem.name.as_str()).unwrap();
        assert_eq!(by_name.index, entry.index);
    }
}

#[test]
fn seeded_runs_repeat_exactly() {
    let p = make_problem("shubert").unwrap().problem;
    let cfg = SaisConfig::new(60, 40).with_seed(11);
    assert_eq!(
        run_sais_seeded(&p, &cfg).unwrap(),
        run_sais_seeded(&p, &cfg).unwrap()
    );
    let sos = SosConfig::new(30, 20).with_seed(11);
    assert_eq!(
        run_sos_seeded(&p, &sos).unwrap(),
        run_sos_seeded(&p, &sos).unwrap()
    );
}

#[test]
fn both_algorithms_solve_booth() {
    let p = make_problem("booth").unwrap().problem;
    assert!(
        run_sais_seeded(&p, &SaisConfig::new(300, 300).with_seed(2))
            .unwrap()
            .converged
    );
    assert!(
        run_sos_seeded(&p, &SosConfig::new(50, 300).with_seed(2))
            .unwrap()
            .converged
    );
}

#[test]
fn experiment_seeds_differ_per_trial_and_are_reproducible() {
    let spec = ExperimentSpec::new("matyas", Algorithm::Sais, 30, 20)
        .with_trials(5)
        .with_seed(3);
    let a = run_experiment(&spec).unwrap();
    let b = run_experiment(&spec.clone().with_threads(Some(3))).unwrap();
    assert_eq!(a.results(), b.results());
    let bests: Vec<f64> = a.results().iter().map(|r| r.best_fitness()).collect();
    assert!(bests.windows(2).any(|w| w[0] != w[1]));
}

#[test]
fn sweep_requires_every_pair_to_match_the_budget() {
    let base = ExperimentSpec {
        budget: Some(1_000),
        ..ExperimentSpec::new("sphere", Algorithm::Sais, 10, 10)
    };
    let err = sweep(&base, &[(10, 100), (7, 7)]).unwrap_err();
    assert!(matches!(err, Error::Budget { .. }), "{err}");
    assert_eq!(sweep(&base, &[(10, 100), (20, 50)]).unwrap().len(), 2);
}

#[test]
fn ablation_runs_four_arms_with_full_curves() {
    let spec = ExperimentSpec::new(13, Algorithm::Sais, 30, 12).with_trials(3);
    let arms = ablate(&spec, 12, CurvePadding::HoldLast).unwrap();
    let masks: Vec<String> = arms
        .iter()
        .map(|a| a.outcome.spec.mask.to_string())
        .collect();
    assert_eq!(masks, ["all", "mutualism", "commensalism", "parasitism"]);
    for arm in &arms {
        assert_eq!(arm.curve.len(), 12);
    }
    assert_eq!(arms[0].outcome.spec.mask, OperatorMask::ALL);
}

#[test]
fn compare_pairs_sais_with_sos() {
    let spec = ExperimentSpec::new("sphere", Algorithm::Sais, 60, 5)
        .with_trials(2)
        .with_tolerance(Some(1e-300));
    let c = compare(&spec).unwrap();
    assert_eq!(c.sos.spec.algorithm, Algorithm::Sos);
    assert!((c.cost.ratio - 3.0).abs() < 1e-12);
}
