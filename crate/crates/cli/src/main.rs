//! `fgc`: Granger-causal direction between two curve time series.
//!
//! Exit status: 0 on success, 2 on input or validation errors, 1 on internal
//! failures. Set `FGC_THREADS` to cap worker threads.

mod commands;
mod output;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fgc",
    version,
    about = "Granger causality between curve time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expanding-window GcGMC analysis of two curve files.
    Analyze(AnalyzeArgs),
    /// Monte Carlo decision counts on the simulated bivariate process.
    Simulate(SimulateArgs),
    /// Transform a curve file.
    Preprocess(PreprocessArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Delimiter {
    Comma,
    Tab,
}

impl Delimiter {
    fn byte(self) -> u8 {
        match self {
            Delimiter::Comma => b',',
            Delimiter::Tab => b'\t',
        }
    }
}

#[derive(Debug, Args)]
struct AnalysisOptions {
    /// Fraction of curves in the initial training window.
    #[arg(long = "train-frac", default_value_t = 0.8)]
    train_frac: f64,

    /// Initial training window size; overrides --train-frac.
    #[arg(long = "n-train")]
    n_train: Option<usize>,

    /// Derivative order of the semi-metric (0, 1 or 2).
    #[arg(long = "deriv-order", default_value_t = 2)]
    deriv_order: u8,

    /// Select bandwidths once on the initial window instead of at every step.
    #[arg(long = "freeze-bandwidths")]
    freeze_bandwidths: bool,

    /// Comma-separated quantile probabilities of the pairwise distances tried as bandwidths.
    #[arg(long = "bandwidth-quantiles", value_delimiter = ',')]
    bandwidth_quantiles: Option<Vec<f64>>,

    /// Minimum number of neighbours with positive weight during cross-validation.
    #[arg(long = "min-active", default_value_t = 1)]
    min_active: usize,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Curve file of the X series.
    #[arg(long)]
    x: PathBuf,

    /// Curve file of the Y series.
    #[arg(long)]
    y: PathBuf,

    #[command(flatten)]
    analysis: AnalysisOptions,

    #[arg(long, value_enum, default_value_t = Delimiter::Comma)]
    delimiter: Delimiter,

    /// Report path; the per-step table goes to `<out>.steps.csv`. Prints to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Sample sizes (comma-separated).
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,

    /// Grid resolutions (comma-separated).
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<usize>,

    /// Replications per (n, p) cell.
    #[arg(long)]
    reps: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long = "burn-in", default_value_t = 50)]
    burn_in: usize,

    /// Scale of the Brownian noise in Y.
    #[arg(long = "noise-scale", default_value_t = 0.1)]
    noise_scale: f64,

    #[command(flatten)]
    analysis: AnalysisOptions,

    /// Output CSV of per-cell counts.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Transform {
    LogReturns,
    CpiNormalize,
}

#[derive(Debug, Args)]
struct PreprocessArgs {
    transform: Transform,

    #[arg(long = "in")]
    input: PathBuf,

    /// CPI curve file (cpi-normalize only).
    #[arg(long)]
    cpi: Option<PathBuf>,

    /// Place log returns at interval midpoints instead of left endpoints.
    #[arg(long)]
    midpoint: bool,

    #[arg(long, value_enum, default_value_t = Delimiter::Comma)]
    delimiter: Delimiter,

    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::configure_threads().and_then(|()| match cli.command {
        Command::Analyze(args) => commands::analyze(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::Preprocess(args) => commands::preprocess(args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fgc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
