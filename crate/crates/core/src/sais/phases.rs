//! The three symbiotic operators, each acting on its own sub-population.
//!
//! Mutualism and commensalism write their moves back unconditionally;
//! selection pressure comes from the elitist merge with the memory
//! population. Parasitism keeps the incumbent unless the fresh antibody is
//! strictly better.

use crate::antibody::{best_index, random_position, Antibody};
use crate::error::Result;
use crate::problem::{EvalCounter, Problem};
use crate::rng::RngStream;

use super::config::StepScaling;

/// Mutualism move for one pair with scalar factors `r1`, `r2`.
///
/// Both antibodies step by `r * (best - mu * bf)` where `mu` is their
/// midpoint. Returns the unclamped positions.
pub fn mutualism_move(
    xi: &[f64],
    xj: &[f64],
    best: &[f64],
    bf: f64,
    r1: f64,
    r2: f64,
) -> (Vec<f64>, Vec<f64>) {
    let d = xi.len();
    mutualism_move_with(xi, xj, best, bf, &vec![r1; d], &vec![r2; d])
}

fn mutualism_move_with(
    xi: &[f64],
    xj: &[f64],
    best: &[f64],
    bf: f64,
    r1: &[f64],
    r2: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let mut ni = Vec::with_capacity(xi.len());
    let mut nj = Vec::with_capacity(xj.len());
    for k in 0..xi.len() {
        let mu = (xi[k] + xj[k]) / 2.0;
        let dir = best[k] - mu * bf;
        ni.push(xi[k] + r1[k] * dir);
        nj.push(xj[k] + r2[k] * dir);
    }
    (ni, nj)
}

/// Commensalism move: `xi + r * (best - xj)`. Returns the unclamped position.
pub fn commensalism_move(xi: &[f64], xj: &[f64], best: &[f64], r: f64) -> Vec<f64> {
    commensalism_move_with(xi, xj, best, &vec![r; xi.len()])
}

fn commensalism_move_with(xi: &[f64], xj: &[f64], best: &[f64], r: &[f64]) -> Vec<f64> {
    (0..xi.len())
        .map(|k| xi[k] + r[k] * (best[k] - xj[k]))
        .collect()
}

/// Parasitism decision: the newcomer wins only when strictly better.
pub fn parasitism_select(incumbent: Antibody, newcomer: Antibody) -> Antibody {
    if newcomer.fitness < incumbent.fitness {
        newcomer
    } else {
        incumbent
    }
}

fn draw_factors(rng: &mut RngStream, scaling: StepScaling, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    match scaling {
        StepScaling::Scalar => vec![rng.uniform(lo, hi); d],
        StepScaling::PerCoordinate => (0..d).map(|_| rng.uniform(lo, hi)).collect(),
    }
}

/// Keeps `best` pointing at the lowest-fitness member (lowest index on ties)
/// after the members in `changed` were overwritten.
fn refresh_best(
    group: &[Antibody],
    best: usize,
    old_best_fitness: f64,
    changed: &[usize],
) -> usize {
    if changed.contains(&best) && group[best].fitness > old_best_fitness {
        return best_index(group).expect("non-empty group");
    }
    let mut b = best;
    for &k in changed {
        let (fk, fb) = (group[k].fitness, group[b].fitness);
        if fk < fb || (fk == fb && k < b) {
            b = k;
        }
    }
    b
}

pub fn mutualism_phase(
    group: &mut [Antibody],
    rng: &mut RngStream,
    problem: &Problem,
    counter: &EvalCounter,
    scaling: StepScaling,
) -> Result<()> {
    let n = group.len();
    if n < 2 {
        return Ok(());
    }
    let d = problem.dimension;
    let mut best = best_index(group).expect("n >= 2");
    for i in 0..n {
        let j = rng.index_excluding(n, i);
        let bf = rng.benefit_factor();
        let r1 = draw_factors(rng, scaling, d, 0.0, 1.0);
        let r2 = draw_factors(rng, scaling, d, 0.0, 1.0);
        let (ni, nj) = mutualism_move_with(
            &group[i].position,
            &group[j].position,
            &group[best].position,
            bf,
            &r1,
            &r2,
        );
        let old_best_fitness = group[best].fitness;
        group[i] = Antibody::evaluated(problem, counter, ni)?;
        group[j] = Antibody::evaluated(problem, counter, nj)?;
        best = refresh_best(group, best, old_best_fitness, &[i, j]);
    }
    Ok(())
}

pub fn commensalism_phase(
    group: &mut [Antibody],
    rng: &mut RngStream,
    problem: &Problem,
    counter: &EvalCounter,
    scaling: StepScaling,
) -> Result<()> {
    let n = group.len();
    if n < 2 {
        return Ok(());
    }
    let d = problem.dimension;
    let mut best = best_index(group).expect("n >= 2");
    for i in 0..n {
        let j = rng.index_excluding(n, i);
        let r = draw_factors(rng, scaling, d, -1.0, 1.0);
        let ni = commensalism_move_with(
            &group[i].position,
            &group[j].position,
            &group[best].position,
            &r,
        );
        let old_best_fitness = group[best].fitness;
        group[i] = Antibody::evaluated(problem, counter, ni)?;
        best = refresh_best(group, best, old_best_fitness, &[i]);
    }
    Ok(())
}

pub fn parasitism_phase(
    group: &mut [Antibody],
    rng: &mut RngStream,
    problem: &Problem,
    counter: &EvalCounter,
) -> Result<()> {
    for slot in group.iter_mut() {
        let position = random_position(problem, rng);
        let fitness = counter.evaluate(problem, &position)?;
        if fitness < slot.fitness {
            *slot = Antibody { position, fitness };
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mutualism_hand_example() {
        // mu = 3, step direction = 1 - 3 * 2 = -5
        let (ni, nj) = mutualism_move(&[2.0], &[4.0], &[1.0], 2.0, 0.5, 0.25);
        assert_abs_diff_eq!(ni[0], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(nj[0], 2.75, epsilon = 1e-12);
    }

    #[test]
    fn mutualism_zero_factors_and_fixed_point() {
        let (ni, nj) = mutualism_move(&[1.0, 2.0], &[3.0, -4.0], &[0.5, 0.5], 2.0, 0.0, 0.0);
        assert_eq!(ni, vec![1.0, 2.0]);
        assert_eq!(nj, vec![3.0, -4.0]);
        let b = [0.7, -1.3];
        let (ni, nj) = mutualism_move(&b, &b, &b, 1.0, 0.9, 0.4);
        assert_eq!(ni, b.to_vec());
        assert_eq!(nj, b.to_vec());
    }

    #[test]
    fn commensalism_hand_example() {
        let ni = commensalism_move(&[5.0], &[3.0], &[1.0], -0.5);
        assert_abs_diff_eq!(ni[0], 6.0, epsilon = 1e-12);
        assert_eq!(commensalism_move(&[5.0], &[1.0], &[1.0], 0.8), vec![5.0]);
        assert_eq!(commensalism_move(&[5.0], &[3.0], &[1.0], 0.0), vec![5.0]);
    }

    #[test]
    fn parasitism_select_branches() {
        let a = |f: f64| Antibody {
            position: vec![f],
            fitness: f,
        };
        assert_eq!(parasitism_select(a(1.0), a(2.0)).fitness, 1.0);
        assert_eq!(parasitism_select(a(1.0), a(1.0)).position, vec![1.0]);
        assert_eq!(parasitism_select(a(3.0), a(2.0)).fitness, 2.0);
    }

    #[test]
    fn parasitism_never_replaces_optimum() {
        let sphere = benchmarks::make_problem("sphere").unwrap().problem;
        let counter = EvalCounter::new();
        let opt = Antibody {
            position: vec![0.0; 30],
            fitness: 0.0,
        };
        let mut group = vec![opt.clone(); 50];
        let mut rng = RngStream::new(3);
        for _ in 0..20 {
            parasitism_phase(&mut group, &mut rng, &sphere, &counter).unwrap();
        }
        assert!(group.iter().all(|a| *a == opt));
        assert_eq!(counter.get(), 1000);
    }

    #[test]
    fn small_groups_are_noops() {
        let p = benchmarks::make_problem("booth").unwrap().problem;
        let counter = EvalCounter::new();
        let mut rng = RngStream::new(0);
        let mut one = vec![Antibody {
            position: vec![1.0, 1.0],
            fitness: p.evaluate(&[1.0, 1.0]).unwrap(),
        }];
        let before = one.clone();
        mutualism_phase(&mut one, &mut rng, &p, &counter, StepScaling::Scalar).unwrap();
        commensalism_phase(&mut one, &mut rng, &p, &counter, StepScaling::Scalar).unwrap();
        assert_eq!(one, before);
        let mut empty: Vec<Antibody> = Vec::new();
        mutualism_phase(&mut empty, &mut rng, &p, &counter, StepScaling::Scalar).unwrap();
        parasitism_phase(&mut empty, &mut rng, &p, &counter).unwrap();
        assert_eq!(counter.get(), 0);
    }

    #[test]
    fn phases_keep_bounds_and_cache() {
        let p = benchmarks::make_problem("matyas").unwrap().problem;
        let counter = EvalCounter::new();
        let mut rng = RngStream::new(8);
        let mut group = crate::antibody::random_population(&p, 40, &mut rng, &counter).unwrap();
        for scaling in [StepScaling::Scalar, StepScaling::PerCoordinate] {
            for _ in 0..10 {
                mutualism_phase(&mut group, &mut rng, &p, &counter, scaling).unwrap();
                commensalism_phase(&mut group, &mut rng, &p, &counter, scaling).unwrap();
                parasitism_phase(&mut group, &mut rng, &p, &counter).unwrap();
            }
        }
        for a in &group {
            assert!(p.contains(&a.position));
            assert_eq!(a.fitness, p.evaluate(&a.position).unwrap());
        }
        // 40 init + 20 rounds of (80 + 40 + 40)
        assert_eq!(counter.get(), 40 + 20 * 160);
    }

    #[test]
    fn incremental_best_matches_full_scan() {
        // Re-run mutualism step by step with a brute-force best lookup.
        let p = benchmarks::make_problem("rastrigin").unwrap().problem;
        let counter = EvalCounter::new();
        let mut init = RngStream::new(77);
        let start = crate::antibody::random_population(&p, 25, &mut init, &counter).unwrap();

        let mut fast = start.clone();
        mutualism_phase(
            &mut fast,
            &mut RngStream::new(5),
            &p,
            &counter,
            StepScaling::Scalar,
        )
        .unwrap();

        let mut slow = start;
        let mut rng = RngStream::new(5);
        let n = slow.len();
        for i in 0..n {
            let j = rng.index_excluding(n, i);
            let bf = rng.benefit_factor();
            let r1 = rng.uniform01();
            let r2 = rng.uniform01();
            let b = best_index(&slow).unwrap();
            let (ni, nj) = mutualism_move(
                &slow[i].position,
                &slow[j].position,
                &slow[b].position,
                bf,
                r1,
                r2,
            );
            slow[i] = Antibody::evaluated(&p, &counter, ni).unwrap();
            slow[j] = Antibody::evaluated(&p, &counter, nj).unwrap();
        }
        assert_eq!(fast, slow);
    }
}
