use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::problem::{EvalCounter, Problem};
use crate::rng::RngStream;

/// A candidate solution with its cached objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Antibody {
    pub position: Vec<f64>,
    pub fitness: f64,
}

impl Antibody {
    /// Clamps `position` into the box and evaluates it.
    pub fn evaluated(
        problem: &Problem,
        counter: &EvalCounter,
        mut position: Vec<f64>,
    ) -> Result<Self> {
        problem.clamp_in_place(&mut position);
        let fitness = counter.evaluate(problem, &position)?;
        Ok(Self { position, fitness })
    }

    pub fn random(problem: &Problem, rng: &mut RngStream, counter: &EvalCounter) -> Result<Self> {
        let position = random_position(problem, rng);
        let fitness = counter.evaluate(problem, &position)?;
        Ok(Self { position, fitness })
    }
}

/// Uniform point in the problem's box.
pub fn random_position(problem: &Problem, rng: &mut RngStream) -> Vec<f64> {
    problem
        .lower
        .iter()
        .zip(&problem.upper)
        .map(|(&lo, &hi)| rng.uniform(lo, hi))
        .collect()
}

pub fn random_population(
    problem: &Problem,
    size: usize,
    rng: &mut RngStream,
    counter: &EvalCounter,
) -> Result<Vec<Antibody>> {
    (0..size)
        .map(|_| Antibody::random(problem, rng, counter))
        .collect()
}

/// Index of the lowest-fitness antibody; ties go to the lowest index.
pub fn best_index(population: &[Antibody]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, ab) in population.iter().enumerate() {
        match best {
            Some(b) if population[b].fitness <= ab.fitness => {}
            _ => best = Some(i),
        }
    }
    best
}
