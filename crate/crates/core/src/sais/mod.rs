//! Symbiotic artificial immune system.
//!
//! Each iteration clones the population into a memory population, splits a
//! random permutation into one equal group per enabled operator (leftovers
//! pass through untouched), applies the operators to their groups, and keeps
//! the best `N` of the updated and memory populations together.

mod config;
pub mod phases;

pub use config::{Operator, OperatorMask, PhaseSchedule, SaisConfig, StepScaling};
pub use phases::{
    commensalism_move, commensalism_phase, mutualism_move, mutualism_phase, parasitism_phase,
    parasitism_select,
};

use crate::antibody::{random_population, Antibody};
use crate::error::{Error, Result};
use crate::problem::{EvalCounter, Problem};
use crate::rng::RngStream;
use crate::trial::TrialResult;

/// Disjoint groups plus the antibodies left over by the equal split.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePartition {
    pub groups: Vec<Vec<Antibody>>,
    pub remainder: Vec<Antibody>,
}

impl PhasePartition {
    /// Groups, in order, followed by the remainder.
    pub fn reassemble(self) -> Vec<Antibody> {
        let mut out: Vec<Antibody> = self.groups.into_iter().flatten().collect();
        out.extend(self.remainder);
        out
    }
}

/// Shuffles `population` and cuts it into `parts` groups of
/// `len / parts` antibodies. With a single part the order is kept.
pub fn partition(
    mut population: Vec<Antibody>,
    parts: usize,
    rng: &mut RngStream,
) -> Result<PhasePartition> {
    if parts == 0 || population.len() < parts {
        return Err(Error::Config(format!(
            "cannot split {} antibodies into {} groups",
            population.len(),
            parts
        )));
    }
    if parts > 1 {
        rng.shuffle(&mut population);
    }
    let size = population.len() / parts;
    let remainder = population.split_off(size * parts);
    let mut groups = Vec::with_capacity(parts);
    let mut rest = population;
    for _ in 0..parts {
        let tail = rest.split_off(size);
        groups.push(rest);
        rest = tail;
    }
    Ok(PhasePartition { groups, remainder })
}

/// Best `N` of `updated ++ memory`, ascending by fitness. The sort is stable,
/// so ties keep updated antibodies ahead of memory ones and otherwise keep
/// their original order.
pub fn elitist_merge(updated: Vec<Antibody>, memory: Vec<Antibody>) -> Result<Vec<Antibody>> {
    if updated.len() != memory.len() {
        return Err(Error::Contract(format!(
            "merge size mismatch: {} updated vs {} memory",
            updated.len(),
            memory.len()
        )));
    }
    let n = updated.len();
    let mut all = updated;
    all.extend(memory);
    all.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
    all.truncate(n);
    Ok(all)
}

fn apply_operator(
    op: Operator,
    group: &mut [Antibody],
    rng: &mut RngStream,
    problem: &Problem,
    counter: &EvalCounter,
    scaling: StepScaling,
) -> Result<()> {
    match op {
        Operator::Mutualism => mutualism_phase(group, rng, problem, counter, scaling),
        Operator::Commensalism => commensalism_phase(group, rng, problem, counter, scaling),
        Operator::Parasitism => parasitism_phase(group, rng, problem, counter),
    }
}

fn apply_operators(
    ops: &[Operator],
    groups: &mut [Vec<Antibody>],
    root: &RngStream,
    iteration: usize,
    problem: &Problem,
    counter: &EvalCounter,
    config: &SaisConfig,
) -> Result<()> {
    let run = |op: Operator, group: &mut Vec<Antibody>| {
        let mut rng = root.derive(op.name(), iteration as u64);
        apply_operator(op, group, &mut rng, problem, counter, config.step_scaling)
    };
    match config.schedule {
        #[cfg(feature = "parallel")]
        PhaseSchedule::Concurrent => {
            use rayon::prelude::*;
            groups
                .par_iter_mut()
                .zip(ops.par_iter())
                .map(|(g, &op)| run(op, g))
                .collect::<Vec<_>>()
                .into_iter()
                .collect()
        }
        _ => groups
            .iter_mut()
            .zip(ops)
            .try_for_each(|(g, &op)| run(op, g)),
    }
}

/// One main-loop pass: memory clone, partition, operators, merge.
pub fn iterate(
    population: Vec<Antibody>,
    problem: &Problem,
    config: &SaisConfig,
    rng: &RngStream,
    iteration: usize,
    counter: &EvalCounter,
) -> Result<Vec<Antibody>> {
    let ops = config.operator_mask.operators();
    let memory = population.clone();
    let mut parts = partition(
        population,
        ops.len(),
        &mut rng.derive("partition", iteration as u64),
    )?;
    apply_operators(
        &ops,
        &mut parts.groups,
        rng,
        iteration,
        problem,
        counter,
        config,
    )?;
    let updated = parts.reassemble();
    if let Some(bad) = updated.iter().find(|a| !a.fitness.is_finite()) {
        return Err(Error::NonFiniteFitness {
            iteration,
            value: bad.fitness,
        });
    }
    elitist_merge(updated, memory)
}

/// Runs SAIS on `problem` using streams derived from `rng`.
pub fn run_sais(problem: &Problem, config: &SaisConfig, rng: &RngStream) -> Result<TrialResult> {
    config.validate()?;
    let tolerance = config.tolerance.unwrap_or(problem.tolerance);
    let counter = EvalCounter::new();
    let mut population = random_population(
        problem,
        config.population_size,
        &mut rng.derive("init", 0),
        &counter,
    )?;
    if let Some(bad) = population.iter().find(|a| !a.fitness.is_finite()) {
        return Err(Error::NonFiniteFitness {
            iteration: 0,
            value: bad.fitness,
        });
    }
    let init_evaluations = counter.get();
    let mut curve = Vec::new();
    let mut iterations_used = None;
    for t in 1..=config.max_iterations {
        population = iterate(population, problem, config, rng, t, &counter)?;
        let best = population[0].fitness;
        curve.push(best);
        if problem.reached(best, tolerance) {
            iterations_used = Some(t);
            break;
        }
    }
    Ok(TrialResult {
        converged: iterations_used.is_some(),
        iterations_used,
        best: population.swap_remove(0),
        evaluations: counter.get(),
        init_evaluations,
        curve,
    })
}

/// `run_sais` with the stream rooted at `config.seed`.
pub fn run_sais_seeded(problem: &Problem, config: &SaisConfig) -> Result<TrialResult> {
    run_sais(problem, config, &RngStream::new(config.seed))
}
