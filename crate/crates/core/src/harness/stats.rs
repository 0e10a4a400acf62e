use serde::{Deserialize, Serialize};

use super::TrialRecord;

pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Sample standard deviation (`n - 1` denominator); 0 for one value.
pub fn sample_std(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    if xs.len() == 1 {
        return Some(0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

/// Aggregate over a set of trials.
///
/// Iteration statistics cover converged trials only. Fitness and evaluation
/// statistics cover every trial that ran to completion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub trials: usize,
    pub successes: usize,
    pub failed: usize,
    pub success_rate: f64,
    pub iteration_mean: Option<f64>,
    pub iteration_std: Option<f64>,
    pub fitness_mean: Option<f64>,
    pub fitness_std: Option<f64>,
    pub mean_evaluations: Option<f64>,
}

impl SummaryStats {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let done: Vec<_> = records.iter().filter_map(|r| r.result.as_ref()).collect();
        let iters: Vec<f64> = done
            .iter()
            .filter_map(|r| r.iterations_used)
            .map(|i| i as f64)
            .collect();
        let fitness: Vec<f64> = done.iter().map(|r| r.best.fitness).collect();
        let evals: Vec<f64> = done.iter().map(|r| r.evaluations as f64).collect();
        let trials = records.len();
        let successes = iters.len();
        Self {
            trials,
            successes,
            failed: trials - done.len(),
            success_rate: if trials == 0 {
                0.0
            } else {
                100.0 * successes as f64 / trials as f64
            },
            iteration_mean: mean(&iters),
            iteration_std: sample_std(&iters),
            fitness_mean: mean(&fitness),
            fitness_std: sample_std(&fitness),
            mean_evaluations: mean(&evals),
        }
    }
}
