use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sais",
    version,
    about = "Run SAIS and SOS experiments on the benchmark catalog"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the benchmark catalog.
    List {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one configuration for a number of seeded trials.
    Run {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        algo: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        curves: CurveArgs,
    },
    /// Run one configuration per `pop:iters` pair.
    Sweep {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        algo: Option<String>,
        /// Comma-separated `pop:iters` pairs. Defaults to the four canonical pairs.
        #[arg(long)]
        pairs: Option<String>,
        /// Require `pop * iters` to equal this for every pair.
        #[arg(long)]
        budget: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        curves: CurveArgs,
    },
    /// Full SAIS against each single-operator variant.
    Ablate {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        curves: CurveArgs,
    },
    /// SAIS and SOS on the same configuration, with the evaluation cost ratio.
    Compare {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        curves: CurveArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Catalog index (1-26) or name.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the problem's own tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// `all`, or operators joined by `+`, e.g. `mutualism+parasitism`.
    #[arg(long)]
    pub mask: Option<String>,
    #[arg(long, value_enum)]
    pub step_scaling: Option<StepScalingArg>,
    /// Size of the trial pool.
    #[arg(long)]
    pub threads: Option<usize>,
    /// JSON experiment spec; its fields override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StepScalingArg {
    Scalar,
    PerCoordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file. Relative paths resolve against `SAIS_OUTPUT_DIR` when set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Include one row per trial (JSON only).
    #[arg(long)]
    pub per_trial: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Write averaged convergence curves as long-form CSV.
    #[arg(long)]
    pub curves: Option<PathBuf>,
    /// Curve length; defaults to the iteration limit.
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, value_enum, default_value_t = PaddingArg::HoldLast)]
    pub padding: PaddingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PaddingArg {
    HoldLast,
    ActiveOnly,
}
