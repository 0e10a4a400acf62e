use serde::{Deserialize, Serialize};

use crate::antibody::Antibody;

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub converged: bool,
    /// 1-based iteration at which the tolerance was first met.
    pub iterations_used: Option<usize>,
    pub best: Antibody,
    /// Total objective evaluations, initialization included.
    pub evaluations: u64,
    /// Evaluations spent building the initial population.
    pub init_evaluations: u64,
    /// Best fitness after each completed iteration.
    pub curve: Vec<f64>,
}

impl TrialResult {
    pub fn best_fitness(&self) -> f64 {
        self.best.fitness
    }

    pub fn iterations_executed(&self) -> usize {
        self.curve.len()
    }

    /// Mean evaluations per main-loop iteration, initialization excluded.
    pub fn evaluations_per_iteration(&self) -> f64 {
        match self.curve.len() {
            0 => 0.0,
            n => (self.evaluations - self.init_evaluations) as f64 / n as f64,
        }
    }
}
