//! Straight-line reimplementation of one SAIS iteration with all three
//! operators, written without any of the engine's helpers so the two can be
//! compared bit for bit.
//!
//! Draw order per stream, which the engine also follows:
//! * `partition:t`: Fisher-Yates, `index(i + 1)` for `i = N-1 .. 1`;
//! * `mutualism:t`: per step `j`, `bf`, then `r1` and `r2` (one or `D`
//!   values each);
//! * `commensalism:t`: per step `j`, then `r`;
//! * `parasitism:t`: `D` uniform coordinates per antibody.

use sais::sais::StepScaling;
use sais::{Antibody, Problem, RngStream};

fn clamp(problem: &Problem, x: Vec<f64>) -> Vec<f64> {
    x.into_iter()
        .enumerate()
        .map(|(k, v)| {
            if v < problem.lower[k] {
                problem.lower[k]
            } else if v > problem.upper[k] {
                problem.upper[k]
            } else {
                v
            }
        })
        .collect()
}

fn eval(problem: &Problem, x: Vec<f64>) -> Antibody {
    let x = clamp(problem, x);
    let fitness = problem.evaluate(&x).expect("oracle point is valid");
    Antibody {
        position: x,
        fitness,
    }
}

fn argmin(group: &[Antibody]) -> usize {
    let mut b = 0;
    for k in 1..group.len() {
        if group[k].fitness < group[b].fitness {
            b = k;
        }
    }
    b
}

fn partner(rng: &mut RngStream, n: usize, i: usize) -> usize {
    let j = rng.index(n - 1);
    if j >= i {
        j + 1
    } else {
        j
    }
}

fn factors(rng: &mut RngStream, scaling: StepScaling, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    match scaling {
        StepScaling::Scalar => {
            let r = rng.uniform(lo, hi);
            vec![r; d]
        }
        StepScaling::PerCoordinate => (0..d).map(|_| rng.uniform(lo, hi)).collect(),
    }
}

/// One full-mask iteration `t` starting from `population`, with streams
/// derived from `root` the same way the engine derives them.
pub fn sais_iteration(
    population: &[Antibody],
    problem: &Problem,
    root: &RngStream,
    t: usize,
    scaling: StepScaling,
) -> Vec<Antibody> {
    let n = population.len();
    let d = problem.dimension;
    let memory = population.to_vec();

    let mut order = population.to_vec();
    let mut rng = root.derive("partition", t as u64);
    let mut i = n - 1;
    while i >= 1 {
        let j = rng.index(i + 1);
        order.swap(i, j);
        i -= 1;
    }
    let size = n / 3;
    let mut g0 = order[0..size].to_vec();
    let mut g1 = order[size..2 * size].to_vec();
    let mut g2 = order[2 * size..3 * size].to_vec();
    let rest = order[3 * size..].to_vec();

    if g0.len() >= 2 {
        let mut rng = root.derive("mutualism", t as u64);
        for i in 0..g0.len() {
            let j = partner(&mut rng, g0.len(), i);
            // a set low bit of the next word means 2
            let bf = if rng.coin() { 2.0 } else { 1.0 };
            let r1 = factors(&mut rng, scaling, d, 0.0, 1.0);
            let r2 = factors(&mut rng, scaling, d, 0.0, 1.0);
            let best = g0[argmin(&g0)].position.clone();
            let (xi, xj) = (g0[i].position.clone(), g0[j].position.clone());
            let mut ni = vec![0.0; d];
            let mut nj = vec![0.0; d];
            for k in 0..d {
                let mu = (xi[k] + xj[k]) / 2.0;
                ni[k] = xi[k] + r1[k] * (best[k] - mu * bf);
                nj[k] = xj[k] + r2[k] * (best[k] - mu * bf);
            }
            g0[i] = eval(problem, ni);
            g0[j] = eval(problem, nj);
        }
    }

    if g1.len() >= 2 {
        let mut rng = root.derive("commensalism", t as u64);
        for i in 0..g1.len() {
            let j = partner(&mut rng, g1.len(), i);
            let r = factors(&mut rng, scaling, d, -1.0, 1.0);
            let best = g1[argmin(&g1)].position.clone();
            let ni: Vec<f64> = (0..d)
                .map(|k| g1[i].position[k] + r[k] * (best[k] - g1[j].position[k]))
                .collect();
            g1[i] = eval(problem, ni);
        }
    }

    let mut rng = root.derive("parasitism", t as u64);
    for slot in g2.iter_mut() {
        let x: Vec<f64> = (0..d)
            .map(|k| rng.uniform(problem.lower[k], problem.upper[k]))
            .collect();
        let f = problem.evaluate(&x).expect("oracle point is valid");
        if f < slot.fitness {
            *slot = Antibody {
                position: x,
                fitness: f,
            };
        }
    }

    let mut pool: Vec<Antibody> = g0.into_iter().chain(g1).chain(g2).chain(rest).collect();
    pool.extend(memory);
    let mut taken = vec![false; pool.len()];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut pick: Option<usize> = None;
        for (k, a) in pool.iter().enumerate() {
            if taken[k] {
                continue;
            }
            match pick {
                Some(p) if pool[p].fitness <= a.fitness => {}
                _ => pick = Some(k),
            }
        }
        let p = pick.expect("pool has 2N members");
        taken[p] = true;
        out.push(pool[p].clone());
    }
    out
}
