//! Structural invariants, each fuzzed over `CASES` random cases. Every check
//! returns `Err` with the shrunk counterexample when it fails.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use sais::antibody::random_population;
use sais::benchmarks::{self, CATALOG_LEN};
use sais::harness::{average_curve, CurvePadding};
use sais::sais::{elitist_merge, iterate, partition, OperatorMask, SaisConfig, StepScaling};
use sais::{clamp_to_bounds, Antibody, EvalCounter, RngStream, TrialResult};

pub const CASES: u32 = 1_000;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

fn finish(
    r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>,
) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn mask_from_bits(bits: u8) -> OperatorMask {
    let ops: Vec<_> = sais::sais::Operator::ALL
        .into_iter()
        .enumerate()
        .filter(|(k, _)| bits & (1 << k) != 0)
        .map(|(_, op)| op)
        .collect();
    OperatorMask::from_operators(&ops).expect("non-empty mask")
}

fn labelled(n: usize) -> Vec<Antibody> {
    (0..n)
        .map(|k| Antibody {
            position: vec![k as f64],
            fitness: k as f64,
        })
        .collect()
}

/// Population size stays `N` and the best fitness never increases, for
/// random problems, sizes, masks and step scalings.
pub fn population_size_and_best_monotone() -> Result<(), String> {
    let strat = (
        1..=CATALOG_LEN,
        3usize..24,
        1usize..5,
        1u8..8,
        any::<bool>(),
        any::<u64>(),
    );
    finish(
        runner().run(&strat, |(index, n, iters, bits, per_coord, seed)| {
            let problem = benchmarks::make_problem(index).unwrap().problem;
            let mask = mask_from_bits(bits);
            prop_assume!(n >= mask.len());
            let mut cfg = SaisConfig::new(n, iters).with_mask(mask);
            cfg.step_scaling = if per_coord {
                StepScaling::PerCoordinate
            } else {
                StepScaling::Scalar
            };
            let root = RngStream::new(seed);
            let counter = EvalCounter::new();
            let mut pop =
                random_population(&problem, n, &mut root.derive("init", 0), &counter).unwrap();
            let mut best = pop.iter().map(|a| a.fitness).fold(f64::INFINITY, f64::min);
            for t in 1..=iters {
                pop = iterate(pop, &problem, &cfg, &root, t, &counter).unwrap();
                prop_assert_eq!(pop.len(), n);
                prop_assert!(pop.iter().all(|a| problem.contains(&a.position)));
                prop_assert!(pop.windows(2).all(|w| w[0].fitness <= w[1].fitness));
                prop_assert!(pop[0].fitness <= best);
                best = pop[0].fitness;
            }
            Ok(())
        }),
    )
}

/// The groups have `floor(N / k)` members each, the remainder `N mod k`, and
/// together they are exactly the input.
pub fn partition_law() -> Result<(), String> {
    let strat = (1usize..=3, 0usize..400, any::<u64>());
    finish(runner().run(&strat, |(parts, extra, seed)| {
        let n = parts + extra;
        let mut rng = RngStream::new(seed);
        let split = partition(labelled(n), parts, &mut rng).unwrap();
        prop_assert_eq!(split.groups.len(), parts);
        for g in &split.groups {
            prop_assert_eq!(g.len(), n / parts);
        }
        prop_assert_eq!(split.remainder.len(), n % parts);
        let mut ids: Vec<f64> = split.reassemble().iter().map(|a| a.fitness).collect();
        ids.sort_by(f64::total_cmp);
        let want: Vec<f64> = (0..n).map(|k| k as f64).collect();
        prop_assert_eq!(ids, want);
        Ok(())
    }))
}

/// Clamping lands in the box, leaves in-box points alone and is idempotent.
pub fn clamp_idempotent() -> Result<(), String> {
    let coord = prop_oneof![-1e12f64..1e12, -1e3f64..1e3, Just(f64::MAX), Just(f64::MIN),];
    let strat = (1..=CATALOG_LEN, proptest::collection::vec(coord, 30));
    finish(runner().run(&strat, |(index, raw)| {
        let problem = benchmarks::make_problem(index).unwrap().problem;
        let x = &raw[..problem.dimension];
        let once = clamp_to_bounds(x, &problem);
        prop_assert!(problem.contains(&once));
        prop_assert_eq!(clamp_to_bounds(&once, &problem), once.clone());
        if problem.contains(x) {
            prop_assert_eq!(&once[..], x);
        }
        Ok(())
    }))
}

fn monotone_curve(start: f64, drops: &[f64]) -> Vec<f64> {
    let mut v = start;
    drops
        .iter()
        .map(|d| {
            v -= d;
            v
        })
        .collect()
}

/// Hold-last averages of non-increasing curves are non-increasing and have
/// the requested length.
pub fn hold_last_curve_monotone() -> Result<(), String> {
    let one = (
        -1e3f64..1e3,
        proptest::collection::vec(prop_oneof![Just(0.0), 0.0f64..10.0], 1..40),
    );
    let strat = (proptest::collection::vec(one, 1..8), 1usize..60);
    finish(runner().run(&strat, |(trials, horizon)| {
        let results: Vec<TrialResult> = trials
            .iter()
            .map(|(start, drops)| {
                let curve = monotone_curve(*start, drops);
                TrialResult {
                    converged: false,
                    iterations_used: None,
                    best: Antibody {
                        position: vec![],
                        fitness: *curve.last().unwrap(),
                    },
                    evaluations: 0,
                    init_evaluations: 0,
                    curve,
                }
            })
            .collect();
        let avg = average_curve(&results, horizon, CurvePadding::HoldLast).unwrap();
        prop_assert_eq!(avg.len(), horizon);
        // the mean is taken in a fixed order, so rounding cannot break the order
        for w in avg.windows(2) {
            prop_assert!(w[1] <= w[0], "{} then {}", w[0], w[1]);
        }
        Ok(())
    }))
}

/// Every objective is finite on random in-box points, noise included.
pub fn objectives_finite_in_bounds() -> Result<(), String> {
    let strat = (1..=CATALOG_LEN, proptest::collection::vec(0.0f64..=1.0, 30));
    finish(runner().run(&strat, |(index, unit)| {
        let problem = benchmarks::make_problem(index).unwrap().problem;
        let x: Vec<f64> = (0..problem.dimension)
            .map(|k| problem.lower[k] + unit[k] * (problem.upper[k] - problem.lower[k]))
            .collect();
        let f = problem
            .evaluate(&x)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(f.is_finite(), "{} at {:?} gave {}", problem.name, x, f);
        prop_assert!(
            f >= problem.known_min - 1e-3,
            "{} below its minimum: {}",
            problem.name,
            f
        );
        Ok(())
    }))
}

/// The merge keeps exactly the `N` smallest fitness values, in order.
pub fn merge_keeps_best() -> Result<(), String> {
    let strat = (1usize..40).prop_flat_map(|n| {
        (
            proptest::collection::vec(-100i32..100, n),
            proptest::collection::vec(-100i32..100, n),
        )
    });
    finish(runner().run(&strat, |(a, b)| {
        let mk = |v: &[i32], tag: f64| -> Vec<Antibody> {
            v.iter()
                .map(|&f| Antibody {
                    position: vec![tag],
                    fitness: f as f64,
                })
                .collect()
        };
        let merged = elitist_merge(mk(&a, 0.0), mk(&b, 1.0)).unwrap();
        let mut all: Vec<f64> = a.iter().chain(&b).map(|&f| f as f64).collect();
        all.sort_by(f64::total_cmp);
        all.truncate(a.len());
        let got: Vec<f64> = merged.iter().map(|x| x.fitness).collect();
        prop_assert_eq!(got, all);
        // on equal fitness an updated member never follows a memory member
        for w in merged.windows(2) {
            if w[0].fitness == w[1].fitness {
                prop_assert!(w[0].position[0] <= w[1].position[0]);
            }
        }
        Ok(())
    }))
}

pub type Check = fn() -> Result<(), String>;

/// Name and check pairs, in report order.
pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        (
            "population size constant, best monotone",
            population_size_and_best_monotone,
        ),
        ("partition law", partition_law),
        ("clamp idempotence", clamp_idempotent),
        ("hold-last curve monotone", hold_last_curve_monotone),
        ("objectives finite in bounds", objectives_finite_in_bounds),
        ("merge keeps best N", merge_keeps_best),
    ]
}
