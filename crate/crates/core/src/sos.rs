//! Sequential symbiotic organisms search baseline.
//!
//! Every organism goes through mutualism, commensalism and parasitism in
//! turn, on the whole population, with greedy replacement. Details follow the
//! canonical formulation:
//! - mutualism uses two independent benefit factors in {1, 2} and
//!   per-coordinate `U(0, 1)` factors;
//! - commensalism uses per-coordinate `U(-1, 1)` factors;
//! - the parasite copies the host and re-draws each coordinate uniformly with
//!   probability 1/2 (at least one coordinate), then challenges a random
//!   other organism.
//!
//! The tracked best only improves, since every replacement is greedy.

use serde::{Deserialize, Serialize};

use crate::antibody::{best_index, random_population, Antibody};
use crate::error::{Error, Result};
use crate::problem::{EvalCounter, Problem};
use crate::rng::RngStream;
use crate::trial::TrialResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SosConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl SosConfig {
    pub fn new(population_size: usize, max_iterations: usize) -> Self {
        Self {
            population_size,
            max_iterations,
            tolerance: None,
            seed: 0,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config(format!(
                "SOS needs at least 2 organisms, got {}",
                self.population_size
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(Error::Config(format!("tolerance must be > 0, got {t}")));
            }
        }
        Ok(())
    }
}

struct Ecosystem<'a> {
    problem: &'a Problem,
    counter: &'a EvalCounter,
    pop: Vec<Antibody>,
    best: usize,
}

impl Ecosystem<'_> {
    /// Replaces organism `k` if `candidate` is strictly better. Returns
    /// whether the replacement happened.
    fn offer(&mut self, k: usize, candidate: Vec<f64>) -> Result<bool> {
        let cand = Antibody::evaluated(self.problem, self.counter, candidate)?;
        if !cand.fitness.is_finite() {
            return Err(Error::NonFiniteFitness {
                iteration: 0,
                value: cand.fitness,
            });
        }
        if cand.fitness < self.pop[k].fitness {
            self.pop[k] = cand;
            if self.pop[k].fitness < self.pop[self.best].fitness {
                self.best = k;
            }
            return Ok(true);
        }
        Ok(false)
    }

    fn mutualism(&mut self, i: usize, rng: &mut RngStream) -> Result<()> {
        let n = self.pop.len();
        let j = rng.index_excluding(n, i);
        let bf1 = rng.benefit_factor();
        let bf2 = rng.benefit_factor();
        let d = self.problem.dimension;
        let (xi, xj, xb) = (
            &self.pop[i].position,
            &self.pop[j].position,
            &self.pop[self.best].position,
        );
        let mut ni = Vec::with_capacity(d);
        let mut nj = Vec::with_capacity(d);
        for k in 0..d {
            let mu = (xi[k] + xj[k]) / 2.0;
            ni.push(xi[k] + rng.uniform01() * (xb[k] - mu * bf1));
        }
        for k in 0..d {
            let mu = (xi[k] + xj[k]) / 2.0;
            nj.push(xj[k] + rng.uniform01() * (xb[k] - mu * bf2));
        }
        self.offer(i, ni)?;
        self.offer(j, nj)?;
        Ok(())
    }

    fn commensalism(&mut self, i: usize, rng: &mut RngStream) -> Result<()> {
        let n = self.pop.len();
        let j = rng.index_excluding(n, i);
        let (xi, xj, xb) = (
            &self.pop[i].position,
            &self.pop[j].position,
            &self.pop[self.best].position,
        );
        let ni: Vec<f64> = (0..xi.len())
            .map(|k| xi[k] + rng.uniform(-1.0, 1.0) * (xb[k] - xj[k]))
            .collect();
        self.offer(i, ni)?;
        Ok(())
    }

    fn parasitism(&mut self, i: usize, rng: &mut RngStream) -> Result<()> {
        let n = self.pop.len();
        let j = rng.index_excluding(n, i);
        let d = self.problem.dimension;
        let mut parasite = self.pop[i].position.clone();
        let mut mutate: Vec<bool> = (0..d).map(|_| rng.coin()).collect();
        if !mutate.iter().any(|&m| m) {
            mutate[rng.index(d)] = true;
        }
        for (k, x) in parasite.iter_mut().enumerate() {
            if mutate[k] {
                *x = rng.uniform(self.problem.lower[k], self.problem.upper[k]);
            }
        }
        self.offer(j, parasite)?;
        Ok(())
    }
}

pub fn run_sos(problem: &Problem, config: &SosConfig, rng: &RngStream) -> Result<TrialResult> {
    config.validate()?;
    let tolerance = config.tolerance.unwrap_or(problem.tolerance);
    let counter = EvalCounter::new();
    let pop = random_population(
        problem,
        config.population_size,
        &mut rng.derive("init", 0),
        &counter,
    )?;
    if let Some(bad) = pop.iter().find(|a| !a.fitness.is_finite()) {
        return Err(Error::NonFiniteFitness {
            iteration: 0,
            value: bad.fitness,
        });
    }
    let init_evaluations = counter.get();
    let best = best_index(&pop).expect("population_size >= 2");
    let mut eco = Ecosystem {
        problem,
        counter: &counter,
        pop,
        best,
    };
    let mut curve = Vec::new();
    let mut iterations_used = None;
    for t in 1..=config.max_iterations {
        let mut step_rng = rng.derive("sos", t as u64);
        for i in 0..eco.pop.len() {
            let res = eco
                .mutualism(i, &mut step_rng)
                .and_then(|_| eco.commensalism(i, &mut step_rng))
                .and_then(|_| eco.parasitism(i, &mut step_rng));
            if let Err(Error::NonFiniteFitness { value, .. }) = res {
                return Err(Error::NonFiniteFitness {
                    iteration: t,
                    value,
                });
            }
            res?;
        }
        let best = eco.pop[eco.best].fitness;
        curve.push(best);
        if problem.reached(best, tolerance) {
            iterations_used = Some(t);
            break;
        }
    }
    let best = eco.pop.swap_remove(eco.best);
    Ok(TrialResult {
        converged: iterations_used.is_some(),
        iterations_used,
        best,
        evaluations: counter.get(),
        init_evaluations,
        curve,
    })
}

pub fn run_sos_seeded(problem: &Problem, config: &SosConfig) -> Result<TrialResult> {
    run_sos(problem, config, &RngStream::new(config.seed))
}
