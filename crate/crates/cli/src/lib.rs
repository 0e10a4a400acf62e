//! Command-line front end: catalog listing, single experiments, parameter
//! sweeps, operator ablations and SAIS/SOS comparisons.
//!
//! Everything runs through [`main_with`], so the binary and the tests share
//! one entry point.

pub mod args;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use sais::harness::{
    self, Algorithm, CurvePadding, ExperimentOutcome, ExperimentSpec, CANONICAL_PAIRS,
};
use sais::sais::StepScaling;
use serde_json::{Map, Value};

use args::{
    Cli, Command, CurveArgs, ExperimentArgs, Format, OutputArgs, PaddingArg, StepScalingArg,
};
use output::{CurveRow, OutputRecord, SummaryRow, TrialRow};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration. Exit code 2.
    Usage(String),
    /// Exit code 1.
    Runtime(String),
    /// The reader went away, e.g. `sais list | head`. Exit code 0.
    Closed,
}

impl CliError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Runtime(format!("{}: {e}", path.display()))
    }

    pub(crate) fn stdout(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::Closed
        } else {
            CliError::Runtime(format!("write failed: {e}"))
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
            CliError::Closed => 0,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
            CliError::Closed => f.write_str("output closed"),
        }
    }
}

impl From<sais::Error> for CliError {
    fn from(e: sais::Error) -> Self {
        match e {
            sais::Error::Config(_)
            | sais::Error::Budget { .. }
            | sais::Error::UnknownProblem { .. } => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Flags first, then the `--config` file on top, then the spec defaults.
fn build_spec(
    ex: &ExperimentArgs,
    algo: Option<&str>,
    fallback_pair: Option<(usize, usize)>,
) -> Result<ExperimentSpec, CliError> {
    let mut m = Map::new();
    let mut put = |k: &str, v: Value| {
        m.insert(k.to_string(), v);
    };
    if let Some(p) = &ex.problem {
        let sel: sais::benchmarks::ProblemSelector = p.as_str().into();
        put(
            "problem",
            serde_json::to_value(sel).expect("selector serializes"),
        );
    }
    if let Some(a) = algo {
        let a: Algorithm = a.parse()?;
        put("algorithm", Value::from(a.name()));
    }
    if let Some(v) = ex.pop {
        put("population_size", v.into());
    }
    if let Some(v) = ex.iters {
        put("max_iterations", v.into());
    }
    if let Some(v) = ex.trials {
        put("trials", v.into());
    }
    if let Some(v) = ex.seed {
        put("base_seed", v.into());
    }
    if let Some(v) = ex.tolerance {
        put("tolerance", v.into());
    }
    if let Some(v) = &ex.mask {
        put("mask", v.as_str().into());
    }
    if let Some(v) = ex.step_scaling {
        let s = match v {
            StepScalingArg::Scalar => StepScaling::Scalar,
            StepScalingArg::PerCoordinate => StepScaling::PerCoordinate,
        };
        put(
            "step_scaling",
            serde_json::to_value(s).expect("enum serializes"),
        );
    }
    if let Some(v) = ex.threads {
        put("threads", v.into());
    }
    if let Some(path) = &ex.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: Value =
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let Value::Object(file) = file else {
            return Err(usage(format!("{}: expected a JSON object", path.display())));
        };
        m.extend(file);
    }
    m.entry("algorithm").or_insert_with(|| "sais".into());
    if let Some((p, i)) = fallback_pair {
        m.entry("population_size").or_insert_with(|| p.into());
        m.entry("max_iterations").or_insert_with(|| i.into());
    }
    for key in ["problem", "population_size", "max_iterations"] {
        if !m.contains_key(key) {
            let flag = match key {
                "problem" => "--problem",
                "population_size" => "--pop",
                _ => "--iters",
            };
            return Err(usage(format!("missing required {flag}")));
        }
    }
    serde_json::from_value(Value::Object(m))
        .map_err(|e| usage(format!("invalid experiment spec: {e}")))
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let pairs = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (p, i) = t
                .split_once(':')
                .ok_or_else(|| usage(format!("pair `{t}` is not of the form pop:iters")))?;
            let p = p
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad population in `{t}`")))?;
            let i = i
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad iterations in `{t}`")))?;
            Ok((p, i))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if pairs.is_empty() {
        return Err(usage("--pairs is empty"));
    }
    Ok(pairs)
}

fn parse_budget(b: f64) -> Result<u64, CliError> {
    if b.is_finite() && b > 0.0 && b.fract() == 0.0 && b <= u64::MAX as f64 {
        Ok(b as u64)
    } else {
        Err(usage(format!(
            "--budget must be a positive integer, got {b}"
        )))
    }
}

fn padding(p: PaddingArg) -> CurvePadding {
    match p {
        PaddingArg::HoldLast => CurvePadding::HoldLast,
        PaddingArg::ActiveOnly => CurvePadding::ActiveOnly,
    }
}

/// Adds one outcome to `record`, with its curve when given.
fn push_outcome(
    record: &mut OutputRecord,
    o: &ExperimentOutcome,
    out: &OutputArgs,
    curve: Option<Vec<f64>>,
) {
    let row = SummaryRow::from_outcome(o);
    let id = row.config_id();
    if out.per_trial {
        record.trials.extend(TrialRow::rows(&id, o));
    }
    if let Some(c) = curve {
        record.curves.extend(CurveRow::rows(&id, &c));
    }
    record.rows.push(row);
}

/// Averaged curve, computed only when `--curves` was given.
fn curve_for(o: &ExperimentOutcome, c: &CurveArgs) -> Result<Option<Vec<f64>>, CliError> {
    if c.curves.is_none() || o.results().is_empty() {
        return Ok(None);
    }
    let horizon = c.horizon.unwrap_or(o.spec.max_iterations);
    Ok(Some(o.average_curve(horizon, padding(c.padding))?))
}

fn finish(
    record: &OutputRecord,
    out: &OutputArgs,
    c: &CurveArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if let Some(path) = &c.curves {
        output::write_curves(&record.curves, path)?;
    }
    output::write_record(record, out.out.as_deref(), out.format, stdout)
}

fn check_output(out: &OutputArgs) -> Result<(), CliError> {
    if out.per_trial && out.format != Format::Json {
        return Err(usage("--per-trial requires --format json"));
    }
    Ok(())
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::List { output: out } => output::write_catalog(
            &sais::benchmarks::catalog(),
            out.out.as_deref(),
            out.format,
            stdout,
        ),
        Command::Run {
            experiment,
            algo,
            output: out,
            curves,
        } => {
            check_output(&out)?;
            let spec = build_spec(&experiment, algo.as_deref(), None)?;
            let o = harness::run_experiment(&spec)?;
            let mut record = OutputRecord::new("run");
            let curve = curve_for(&o, &curves)?;
            push_outcome(&mut record, &o, &out, curve);
            finish(&record, &out, &curves, stdout)
        }
        Command::Sweep {
            experiment,
            algo,
            pairs,
            budget,
            output: out,
            curves,
        } => {
            check_output(&out)?;
            let pairs = match pairs {
                Some(s) => parse_pairs(&s)?,
                None => CANONICAL_PAIRS.to_vec(),
            };
            let mut spec = build_spec(&experiment, algo.as_deref(), Some(pairs[0]))?;
            if let Some(b) = budget {
                spec.budget = Some(parse_budget(b)?);
            }
            let outcomes = harness::sweep(&spec, &pairs)?;
            let mut record = OutputRecord::new("sweep");
            for o in &outcomes {
                let curve = curve_for(o, &curves)?;
                push_outcome(&mut record, o, &out, curve);
            }
            finish(&record, &out, &curves, stdout)
        }
        Command::Ablate {
            experiment,
            output: out,
            curves,
        } => {
            check_output(&out)?;
            let spec = build_spec(&experiment, Some("sais"), None)?;
            let horizon = curves.horizon.unwrap_or(spec.max_iterations);
            let arms = harness::ablate(&spec, horizon, padding(curves.padding))?;
            let mut record = OutputRecord::new("ablate");
            for arm in arms {
                push_outcome(&mut record, &arm.outcome, &out, Some(arm.curve));
            }
            finish(&record, &out, &curves, stdout)
        }
        Command::Compare {
            experiment,
            output: out,
            curves,
        } => {
            check_output(&out)?;
            let spec = build_spec(&experiment, Some("sais"), None)?;
            let cmp = harness::compare(&spec)?;
            let mut record = OutputRecord::new("compare");
            for o in [&cmp.sais, &cmp.sos] {
                let curve = curve_for(o, &curves)?;
                push_outcome(&mut record, o, &out, curve);
            }
            if out.format == Format::Csv {
                writeln!(
                    stderr,
                    "evals/iteration: sais {} sos {} ratio {}",
                    cmp.cost.sais_evals_per_iteration,
                    cmp.cost.sos_evals_per_iteration,
                    cmp.cost.ratio
                )
                .map_err(CliError::stdout)?;
            }
            record.cost = Some(cmp.cost);
            finish(&record, &out, &curves, stdout)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code as u8;
        }
    };
    match run(cli, stdout, stderr) {
        Ok(()) | Err(CliError::Closed) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
