//! Multi-trial experiments: repeated seeded runs, parameter sweeps under a
//! shared budget, operator ablations and SAIS/SOS cost comparisons.
//!
//! Trial `t` of an experiment always uses the stream
//! `RngStream::new(base_seed).derive("trial", t)`, and results are folded in
//! trial order, so the pool size never changes the output.

mod curve;
mod stats;

pub use crate::trial::TrialResult;
pub use curve::{average_curve, CurvePadding};
pub use stats::{mean, sample_std, SummaryStats};

use serde::{Deserialize, Serialize};

use crate::benchmarks::{make_problem, ProblemSelector};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::rng::RngStream;
use crate::sais::{run_sais, OperatorMask, SaisConfig, StepScaling};
use crate::sos::{run_sos, SosConfig};

/// Parameter grid of the canonical study: `(population, iterations)` pairs
/// sharing `CANONICAL_BUDGET`.
pub const CANONICAL_PAIRS: [(usize, usize); 4] =
    [(50, 500_000), (500, 50_000), (5_000, 5_000), (50_000, 500)];
pub const CANONICAL_BUDGET: u64 = 25_000_000;
pub const DEFAULT_TRIALS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sais,
    Sos,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sais => "sais",
            Algorithm::Sos => "sos",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sais" => Ok(Algorithm::Sais),
            "sos" => Ok(Algorithm::Sos),
            other => Err(Error::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub problem: ProblemSelector,
    pub algorithm: Algorithm,
    pub population_size: usize,
    pub max_iterations: usize,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Ignored by SOS.
    #[serde(default)]
    pub mask: OperatorMask,
    #[serde(default)]
    pub step_scaling: StepScaling,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// When set, `population_size * max_iterations` must equal it.
    #[serde(default)]
    pub budget: Option<u64>,
    /// Trial pool size; `None` uses the rayon default.
    #[serde(default, skip_serializing)]
    pub threads: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(
        problem: impl Into<ProblemSelector>,
        algorithm: Algorithm,
        population_size: usize,
        max_iterations: usize,
    ) -> Self {
        Self {
            problem: problem.into(),
            algorithm,
            population_size,
            max_iterations,
            tolerance: None,
            mask: OperatorMask::ALL,
            step_scaling: StepScaling::default(),
            trials: DEFAULT_TRIALS,
            base_seed: 0,
            budget: None,
            threads: None,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    pub fn with_mask(mut self, mask: OperatorMask) -> Self {
        self.mask = mask;
        self
    }

    pub fn with_tolerance(mut self, tolerance: Option<f64>) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_pair(mut self, population_size: usize, max_iterations: usize) -> Self {
        self.population_size = population_size;
        self.max_iterations = max_iterations;
        self
    }

    pub fn check_budget(&self) -> Result<()> {
        if let Some(budget) = self.budget {
            let product = self.population_size as u128 * self.max_iterations as u128;
            if product != budget as u128 {
                return Err(Error::Budget {
                    pop: self.population_size,
                    iters: self.max_iterations,
                    product,
                    budget: budget as u128,
                });
            }
        }
        Ok(())
    }

    pub fn sais_config(&self) -> SaisConfig {
        SaisConfig {
            population_size: self.population_size,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            operator_mask: self.mask,
            seed: self.base_seed,
            step_scaling: self.step_scaling,
            schedule: Default::default(),
        }
    }

    pub fn sos_config(&self) -> SosConfig {
        SosConfig {
            population_size: self.population_size,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            seed: self.base_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        self.check_budget()?;
        match self.algorithm {
            Algorithm::Sais => self.sais_config().validate(),
            Algorithm::Sos => self.sos_config().validate(),
        }
    }
}

/// One trial: the result, or the error that stopped it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub result: Option<TrialResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub spec: ExperimentSpec,
    pub problem_index: usize,
    pub problem_name: String,
    /// Tolerance actually used for the convergence test.
    pub tolerance: f64,
    pub summary: SummaryStats,
    pub records: Vec<TrialRecord>,
}

impl ExperimentOutcome {
    pub fn results(&self) -> Vec<TrialResult> {
        self.records
            .iter()
            .filter_map(|r| r.result.clone())
            .collect()
    }

    pub fn average_curve(&self, horizon: usize, padding: CurvePadding) -> Result<Vec<f64>> {
        average_curve(&self.results(), horizon, padding)
    }
}

pub fn trial_stream(base_seed: u64, trial: usize) -> RngStream {
    RngStream::new(base_seed).derive("trial", trial as u64)
}

pub fn run_trial(problem: &Problem, spec: &ExperimentSpec, trial: usize) -> Result<TrialResult> {
    let rng = trial_stream(spec.base_seed, trial);
    match spec.algorithm {
        Algorithm::Sais => run_sais(problem, &spec.sais_config(), &rng),
        Algorithm::Sos => run_sos(problem, &spec.sos_config(), &rng),
    }
}

fn run_trials(problem: &Problem, spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    let one = |t: usize| {
        let (result, error) = match run_trial(problem, spec, t) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        TrialRecord {
            trial: t,
            result,
            error,
        }
    };
    #[cfg(feature = "parallel")]
    {
        if spec.threads != Some(1) {
            use rayon::prelude::*;
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(n) = spec.threads {
                builder = builder.num_threads(n);
            }
            let pool = builder
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            return Ok(pool.install(|| (0..spec.trials).into_par_iter().map(one).collect()));
        }
    }
    Ok((0..spec.trials).map(one).collect())
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    spec.validate()?;
    let entry = make_problem(spec.problem.clone())?;
    let records = run_trials(&entry.problem, spec)?;
    Ok(ExperimentOutcome {
        spec: spec.clone(),
        problem_index: entry.index,
        problem_name: entry.problem.name.clone(),
        tolerance: spec.tolerance.unwrap_or(entry.problem.tolerance),
        summary: SummaryStats::from_records(&records),
        records,
    })
}

/// Runs `base` once per `(population, iterations)` pair, in order. Every pair
/// is checked against the budget before any trial runs.
pub fn sweep(base: &ExperimentSpec, pairs: &[(usize, usize)]) -> Result<Vec<ExperimentOutcome>> {
    let specs: Vec<_> = pairs
        .iter()
        .map(|&(p, i)| base.clone().with_pair(p, i))
        .collect();
    for s in &specs {
        s.validate()?;
    }
    specs.iter().map(run_experiment).collect()
}

/// One configuration of an ablation study with its averaged curve.
#[derive(Debug, Clone, PartialEq)]
pub struct AblationArm {
    pub mask: OperatorMask,
    pub outcome: ExperimentOutcome,
    pub curve: Vec<f64>,
}

/// Full SAIS and the three single-operator variants on the same trial seeds.
pub fn ablate(
    base: &ExperimentSpec,
    horizon: usize,
    padding: CurvePadding,
) -> Result<Vec<AblationArm>> {
    OperatorMask::ablation_set()
        .into_iter()
        .map(|mask| {
            let mut spec = base.clone().with_mask(mask);
            spec.algorithm = Algorithm::Sais;
            let outcome = run_experiment(&spec)?;
            let curve = outcome.average_curve(horizon, padding)?;
            Ok(AblationArm {
                mask,
                outcome,
                curve,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub population_size: usize,
    pub sais_evals_per_iteration: f64,
    pub sos_evals_per_iteration: f64,
    /// SOS over SAIS.
    pub ratio: f64,
}

fn mean_evals_per_iteration(outcome: &ExperimentOutcome) -> f64 {
    let per: Vec<f64> = outcome
        .results()
        .iter()
        .map(TrialResult::evaluations_per_iteration)
        .collect();
    mean(&per).unwrap_or(0.0)
}

impl CostReport {
    pub fn from_outcomes(sais: &ExperimentOutcome, sos: &ExperimentOutcome) -> Self {
        let a = mean_evals_per_iteration(sais);
        let b = mean_evals_per_iteration(sos);
        Self {
            population_size: sais.spec.population_size,
            sais_evals_per_iteration: a,
            sos_evals_per_iteration: b,
            ratio: b / a,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub sais: ExperimentOutcome,
    pub sos: ExperimentOutcome,
    pub cost: CostReport,
}

/// Runs the same spec with both algorithms and reports evaluation cost.
pub fn compare(base: &ExperimentSpec) -> Result<Comparison> {
    let mut sais_spec = base.clone();
    sais_spec.algorithm = Algorithm::Sais;
    let mut sos_spec = base.clone();
    sos_spec.algorithm = Algorithm::Sos;
    sos_spec.mask = OperatorMask::ALL;
    let sais = run_experiment(&sais_spec)?;
    let sos = run_experiment(&sos_spec)?;
    let cost = CostReport::from_outcomes(&sais, &sos);
    Ok(Comparison { sais, sos, cost })
}

/// Evaluation cost of SAIS and SOS with equal population sizes.
pub fn compare_cost(
    problem: impl Into<ProblemSelector>,
    sais: &SaisConfig,
    sos: &SosConfig,
    trials: usize,
) -> Result<CostReport> {
    if sais.population_size != sos.population_size {
        return Err(Error::Config(format!(
            "population sizes differ: SAIS {} vs SOS {}",
            sais.population_size, sos.population_size
        )));
    }
    let problem = problem.into();
    let to_spec = |algorithm, iters, tolerance, seed| ExperimentSpec {
        tolerance,
        base_seed: seed,
        mask: sais.operator_mask,
        step_scaling: sais.step_scaling,
        ..ExperimentSpec::new(problem.clone(), algorithm, sais.population_size, iters)
            .with_trials(trials)
    };
    let a = run_experiment(&to_spec(
        Algorithm::Sais,
        sais.max_iterations,
        sais.tolerance,
        sais.seed,
    ))?;
    let b = run_experiment(&to_spec(
        Algorithm::Sos,
        sos.max_iterations,
        sos.tolerance,
        sos.seed,
    ))?;
    Ok(CostReport::from_outcomes(&a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_pairs_share_budget() {
        for (p, i) in CANONICAL_PAIRS {
            assert_eq!((p * i) as u64, CANONICAL_BUDGET);
        }
    }

    #[test]
    fn budget_violation_names_pair() {
        let mut base = ExperimentSpec::new(3, Algorithm::Sais, 50, 500_000);
        base.budget = Some(CANONICAL_BUDGET);
        match sweep(&base, &[(5_000, 5_000), (100, 100)]) {
            Err(Error::Budget {
                pop: 100,
                iters: 100,
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(sweep(&base, &[]).unwrap().is_empty());
    }

    #[test]
    fn single_trial_stats() {
        let spec = ExperimentSpec::new("matyas", Algorithm::Sais, 60, 300)
            .with_trials(1)
            .with_seed(5);
        let out = run_experiment(&spec).unwrap();
        let r = out.records[0].result.as_ref().unwrap();
        assert!(r.converged);
        assert_eq!(out.summary.success_rate, 100.0);
        assert_eq!(
            out.summary.iteration_mean,
            Some(r.iterations_used.unwrap() as f64)
        );
        assert_eq!(out.summary.iteration_std, Some(0.0));
        assert_eq!(out.summary.fitness_mean, Some(r.best.fitness));
        assert_eq!(out.summary.fitness_std, Some(0.0));
    }

    #[test]
    fn failed_trials_are_recorded() {
        let spec = ExperimentSpec::new("matyas", Algorithm::Sais, 2, 10);
        assert!(run_experiment(&spec).is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let spec = ExperimentSpec::new("booth", Algorithm::Sais, 90, 60)
            .with_trials(6)
            .with_seed(11);
        let a = run_experiment(&spec.clone().with_threads(Some(1))).unwrap();
        let b = run_experiment(&spec.clone().with_threads(Some(4))).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.summary, b.summary);
    }

    #[test]
    fn cost_ratio_small() {
        let r = compare_cost(
            3,
            &SaisConfig::new(3, 5).with_tolerance(1e-300),
            &SosConfig::new(3, 5).with_tolerance(1e-300),
            1,
        )
        .unwrap();
        // groups of one: only parasitism evaluates
        assert_eq!(r.sais_evals_per_iteration, 1.0);
        assert_eq!(r.sos_evals_per_iteration, 12.0);

        let r = compare_cost(
            3,
            &SaisConfig::new(6, 5).with_tolerance(1e-300),
            &SosConfig::new(6, 5).with_tolerance(1e-300),
            1,
        )
        .unwrap();
        assert_eq!(r.sais_evals_per_iteration, 8.0);
        assert_eq!(r.ratio, 3.0);
    }

    #[test]
    fn compare_cost_requires_equal_population() {
        assert!(compare_cost(1, &SaisConfig::new(30, 1), &SosConfig::new(31, 1), 1).is_err());
    }

    #[test]
    fn spec_json_defaults() {
        let spec: ExperimentSpec = serde_json::from_str(
            r#"{"problem": "sphere", "algorithm": "sais", "population_size": 30, "max_iterations": 5}"#,
        )
        .unwrap();
        assert_eq!(spec.trials, 30);
        assert_eq!(spec.mask, OperatorMask::ALL);
        let spec: ExperimentSpec = serde_json::from_str(
            r#"{"problem": 17, "algorithm": "sos", "population_size": 30, "max_iterations": 5, "budget": 150}"#,
        )
        .unwrap();
        assert_eq!(spec.problem, ProblemSelector::Index(17));
        assert!(spec.validate().is_ok());
    }
}
