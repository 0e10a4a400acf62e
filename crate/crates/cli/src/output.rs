use std::env;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sais::benchmarks::CatalogRow;
use sais::harness::{Algorithm, CostReport, ExperimentOutcome};
use serde::Serialize;

use crate::args::Format;
use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";
pub const OUTPUT_DIR_ENV: &str = "SAIS_OUTPUT_DIR";

pub const SUMMARY_COLUMNS: [&str; 15] = [
    "problem_index",
    "problem_name",
    "algorithm",
    "mask",
    "pop",
    "iters",
    "trials",
    "seed",
    "tolerance",
    "success_rate",
    "iter_mean",
    "iter_std",
    "fitness_mean",
    "fitness_std",
    "mean_evals",
];

/// One configuration's spec echo and statistics.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub problem_index: usize,
    pub problem_name: String,
    pub algorithm: String,
    /// Absent for SOS, which has no operator mask.
    pub mask: Option<String>,
    pub pop: usize,
    pub iters: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub success_rate: f64,
    pub iter_mean: Option<f64>,
    pub iter_std: Option<f64>,
    pub fitness_mean: Option<f64>,
    pub fitness_std: Option<f64>,
    pub mean_evals: Option<f64>,
}

impl SummaryRow {
    pub fn from_outcome(o: &ExperimentOutcome) -> Self {
        let s = &o.summary;
        Self {
            problem_index: o.problem_index,
            problem_name: o.problem_name.clone(),
            algorithm: o.spec.algorithm.name().to_string(),
            mask: match o.spec.algorithm {
                Algorithm::Sais => Some(o.spec.mask.to_string()),
                Algorithm::Sos => None,
            },
            pop: o.spec.population_size,
            iters: o.spec.max_iterations,
            trials: o.spec.trials,
            seed: o.spec.base_seed,
            tolerance: o.tolerance,
            success_rate: s.success_rate,
            iter_mean: s.iteration_mean,
            iter_std: s.iteration_std,
            fitness_mean: s.fitness_mean,
            fitness_std: s.fitness_std,
            mean_evals: s.mean_evaluations,
        }
    }

    pub fn config_id(&self) -> String {
        format!(
            "{}:{}:{}:p{}:i{}",
            self.problem_index,
            self.algorithm,
            self.mask.as_deref().unwrap_or("sos"),
            self.pop,
            self.iters
        )
    }

    fn cells(&self, num: impl Fn(f64) -> String) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(&num).unwrap_or_else(|| "n/a".to_string());
        vec![
            self.problem_index.to_string(),
            self.problem_name.clone(),
            self.algorithm.clone(),
            self.mask.clone().unwrap_or_else(|| "n/a".to_string()),
            self.pop.to_string(),
            self.iters.to_string(),
            self.trials.to_string(),
            self.seed.to_string(),
            num(self.tolerance),
            num(self.success_rate),
            opt(self.iter_mean),
            opt(self.iter_std),
            opt(self.fitness_mean),
            opt(self.fitness_std),
            opt(self.mean_evals),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub config_id: String,
    pub trial: usize,
    pub converged: Option<bool>,
    pub iterations_used: Option<usize>,
    pub iterations_executed: Option<usize>,
    pub best_fitness: Option<f64>,
    pub best_position: Option<Vec<f64>>,
    pub evaluations: Option<u64>,
    pub error: Option<String>,
}

impl TrialRow {
    pub fn rows(config_id: &str, o: &ExperimentOutcome) -> Vec<Self> {
        o.records
            .iter()
            .map(|r| {
                let res = r.result.as_ref();
                TrialRow {
                    config_id: config_id.to_string(),
                    trial: r.trial,
                    converged: res.map(|x| x.converged),
                    iterations_used: res.and_then(|x| x.iterations_used),
                    iterations_executed: res.map(|x| x.iterations_executed()),
                    best_fitness: res.map(|x| x.best_fitness()),
                    best_position: res.map(|x| x.best.position.clone()),
                    evaluations: res.map(|x| x.evaluations),
                    error: r.error.clone(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub config_id: String,
    pub iteration: usize,
    pub mean_best_fitness: f64,
}

impl CurveRow {
    pub fn rows(config_id: &str, curve: &[f64]) -> Vec<Self> {
        curve
            .iter()
            .enumerate()
            .map(|(t, &v)| CurveRow {
                config_id: config_id.to_string(),
                iteration: t + 1,
                mean_best_fitness: v,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub rows: Vec<SummaryRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trials: Vec<TrialRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostReport>,
}

impl OutputRecord {
    pub fn new(command: &'static str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            rows: Vec::new(),
            trials: Vec::new(),
            curves: Vec::new(),
            cost: None,
        }
    }
}

/// Resolves a relative `--out` path against `SAIS_OUTPUT_DIR`.
pub fn resolve(path: &Path) -> PathBuf {
    match env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn open<'a>(
    out: Option<&Path>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, CliError> {
    match out {
        None => Ok(Box::new(stdout)),
        Some(p) => {
            let p = resolve(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
            }
            let f = fs::File::create(&p).map_err(|e| CliError::io(&p, e))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
    }
}

/// Six significant digits, for terminal tables.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn write_table(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(w, "{}", line(header.to_vec()))?;
    for r in rows {
        writeln!(w, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::stdout(io),
        other => CliError::Runtime(format!("csv: {other:?}")),
    }
}

fn json_err(e: serde_json::Error) -> CliError {
    match e.io_error_kind() {
        Some(kind) => CliError::stdout(kind.into()),
        None => CliError::Runtime(format!("json: {e}")),
    }
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or large magnitudes.
pub fn exact(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_record(
    record: &OutputRecord,
    out: Option<&Path>,
    format: Format,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut w = open(out, stdout)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, record).map_err(json_err)?;
            writeln!(w).map_err(CliError::stdout)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(SUMMARY_COLUMNS).map_err(csv_err)?;
            for row in &record.rows {
                c.write_record(row.cells(exact)).map_err(csv_err)?;
            }
            c.flush().map_err(CliError::stdout)?;
        }
        Format::Table => {
            let rows: Vec<_> = record.rows.iter().map(|r| r.cells(sig6)).collect();
            write_table(&mut w, &SUMMARY_COLUMNS, &rows).map_err(CliError::stdout)?;
            if let Some(cost) = &record.cost {
                writeln!(
                    w,
                    "evals/iteration: sais {}  sos {}  ratio {}",
                    sig6(cost.sais_evals_per_iteration),
                    sig6(cost.sos_evals_per_iteration),
                    sig6(cost.ratio)
                )
                .map_err(CliError::stdout)?;
            }
        }
    }
    w.flush().map_err(CliError::stdout)
}

pub fn write_curves(rows: &[CurveRow], path: &Path) -> Result<(), CliError> {
    let mut sink = io::sink();
    let mut w = open(Some(path), &mut sink)?;
    let mut c = csv::Writer::from_writer(&mut w);
    for r in rows {
        c.serialize(r).map_err(csv_err)?;
    }
    c.flush().map_err(CliError::stdout)?;
    drop(c);
    w.flush().map_err(CliError::stdout)
}

pub fn write_catalog(
    rows: &[CatalogRow],
    out: Option<&Path>,
    format: Format,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut w = open(out, stdout)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows).map_err(json_err)?;
            writeln!(w).map_err(CliError::stdout)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            for r in rows {
                c.serialize(r).map_err(csv_err)?;
            }
            c.flush().map_err(CliError::stdout)?;
        }
        Format::Table => {
            let header = ["index", "name", "dim", "lower", "upper", "min"];
            let cells: Vec<_> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.index.to_string(),
                        r.name.clone(),
                        r.dimension.to_string(),
                        sig6(r.lower),
                        sig6(r.upper),
                        sig6(r.known_min),
                    ]
                })
                .collect();
            write_table(&mut w, &header, &cells).map_err(CliError::stdout)?;
        }
    }
    w.flush().map_err(CliError::stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formats() {
        assert_eq!(sig6(105.23333), "105.233");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-186.730909), "-186.731");
        assert_eq!(sig6(1.5e-13), "1.50000e-13");
        assert_eq!(sig6(33325000.0), "3.33250e7");
    }
}
