//! Browser bindings: objective landscapes, single-run traces and ablation
//! curves, returned to JavaScript as flat arrays or JSON strings.
//!
//! The plain functions are what the bindings call; they are also used
//! directly by the native tests.

use sais::antibody::random_population;
use sais::benchmarks::{self, BenchmarkEntry};
use sais::harness::{self, CurvePadding, ExperimentSpec};
use sais::problem::EvalCounter;
use sais::sais::{iterate, OperatorMask, SaisConfig};
use sais::{Problem, RngStream};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest population a trace will snapshot; bigger runs keep the first
/// `MAX_SNAPSHOT` antibodies of each iteration.
pub const MAX_SNAPSHOT: usize = 400;

#[derive(Debug, Clone, Serialize)]
pub struct ProblemInfo {
    pub index: usize,
    pub name: String,
    pub dimension: usize,
    pub lower: f64,
    pub upper: f64,
    pub known_min: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    pub problem: String,
    pub converged_at: Option<usize>,
    pub curve: Vec<f64>,
    /// Per iteration, the first two coordinates of the population laid out
    /// as `x0, y0, x1, y1, ...`. Entry 0 is the initial population.
    pub snapshots: Vec<Vec<f64>>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AblationCurve {
    pub mask: String,
    pub success_rate: f64,
    pub curve: Vec<f64>,
}

fn lookup(problem: &str) -> Result<BenchmarkEntry, String> {
    benchmarks::make_problem(problem).map_err(|e| e.to_string())
}

pub fn problem_list() -> Vec<ProblemInfo> {
    benchmarks::catalog()
        .into_iter()
        .map(|r| ProblemInfo {
            index: r.index,
            name: r.name,
            dimension: r.dimension,
            lower: r.lower,
            upper: r.upper,
            known_min: r.known_min,
        })
        .collect()
}

/// Noise-free objective on a `resolution x resolution` grid over the first
/// two coordinates, row-major with `y` ascending. Remaining coordinates are
/// pinned at the midpoint of their range.
pub fn landscape_grid(problem: &str, resolution: usize) -> Result<Vec<f64>, String> {
    if resolution < 2 {
        return Err("resolution must be at least 2".into());
    }
    let p = lookup(problem)?.problem;
    if p.dimension < 2 {
        return Err(format!("{} has fewer than two coordinates", p.name));
    }
    let mut x: Vec<f64> = p
        .lower
        .iter()
        .zip(&p.upper)
        .map(|(l, u)| 0.5 * (l + u))
        .collect();
    let step = |k: usize, i: usize| {
        p.lower[k] + (p.upper[k] - p.lower[k]) * i as f64 / (resolution - 1) as f64
    };
    let mut out = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        x[1] = step(1, row);
        for col in 0..resolution {
            x[0] = step(0, col);
            out.push(p.evaluate_noiseless(&x).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn snapshot(pop: &[sais::Antibody]) -> Vec<f64> {
    pop.iter()
        .take(MAX_SNAPSHOT)
        .flat_map(|a| [a.position[0], *a.position.get(1).unwrap_or(&0.0)])
        .collect()
}

/// One seeded SAIS run, recording the population after every iteration.
/// The curve matches `run_sais_seeded` with the same configuration.
pub fn trace_run(problem: &Problem, config: &SaisConfig) -> Result<Trace, String> {
    config.validate().map_err(|e| e.to_string())?;
    let tolerance = config.tolerance.unwrap_or(problem.tolerance);
    let rng = RngStream::new(config.seed);
    let counter = EvalCounter::new();
    let mut pop = random_population(
        problem,
        config.population_size,
        &mut rng.derive("init", 0),
        &counter,
    )
    .map_err(|e| e.to_string())?;
    let mut snapshots = vec![snapshot(&pop)];
    let mut curve = Vec::new();
    let mut converged_at = None;
    for t in 1..=config.max_iterations {
        pop = iterate(pop, problem, config, &rng, t, &counter).map_err(|e| e.to_string())?;
        curve.push(pop[0].fitness);
        snapshots.push(snapshot(&pop));
        if problem.reached(pop[0].fitness, tolerance) {
            converged_at = Some(t);
            break;
        }
    }
    Ok(Trace {
        problem: problem.name.clone(),
        converged_at,
        curve,
        snapshots,
        best_position: pop[0].position.clone(),
        best_fitness: pop[0].fitness,
    })
}

pub fn trace(
    problem: &str,
    pop: usize,
    iters: usize,
    seed: u64,
    mask: &str,
) -> Result<Trace, String> {
    let p = lookup(problem)?.problem;
    let mask: OperatorMask = mask.parse().map_err(|e: sais::Error| e.to_string())?;
    let config = SaisConfig::new(pop, iters).with_seed(seed).with_mask(mask);
    trace_run(&p, &config)
}

/// Hold-last averaged curves for full SAIS and each single operator.
pub fn ablation(
    problem: &str,
    pop: usize,
    iters: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<AblationCurve>, String> {
    let index = lookup(problem)?.index;
    let spec = ExperimentSpec::new(index, harness::Algorithm::Sais, pop, iters)
        .with_trials(trials)
        .with_seed(seed);
    let arms = harness::ablate(&spec, iters, CurvePadding::HoldLast).map_err(|e| e.to_string())?;
    Ok(arms
        .into_iter()
        .map(|a| AblationCurve {
            mask: a.mask.to_string(),
            success_rate: a.outcome.summary.success_rate,
            curve: a.curve,
        })
        .collect())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, JsError> {
    serde_json::to_string(v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = problems)]
pub fn js_problems() -> Result<String, JsError> {
    to_json(&problem_list())
}

#[wasm_bindgen(js_name = landscape)]
pub fn js_landscape(problem: &str, resolution: usize) -> Result<Vec<f64>, JsError> {
    landscape_grid(problem, resolution).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = trace)]
pub fn js_trace(
    problem: &str,
    pop: usize,
    iters: usize,
    seed: u32,
    mask: &str,
) -> Result<String, JsError> {
    let t = trace(problem, pop, iters, seed as u64, mask).map_err(|e| JsError::new(&e))?;
    to_json(&t)
}

#[wasm_bindgen(js_name = ablation)]
pub fn js_ablation(
    problem: &str,
    pop: usize,
    iters: usize,
    trials: usize,
    seed: u32,
) -> Result<String, JsError> {
    let arms = ablation(problem, pop, iters, trials, seed as u64).map_err(|e| JsError::new(&e))?;
    to_json(&arms)
}
