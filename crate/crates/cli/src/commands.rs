use std::fmt;

use fgc_core::gcgmc::{run_expanding_window, AnalysisConfig, WindowPlan};
use fgc_core::ingest::{self, format_curves, ReturnPlacement};
use fgc_core::simulator::{run_monte_carlo, McPlan, SimConfig};
use fgc_core::{BandwidthSearch, KernelSpec, SemiMetricSpec};

use crate::output::{steps_path, write_atomic};
use crate::report::{self, Inputs};
use crate::{AnalysisOptions, AnalyzeArgs, PreprocessArgs, SimulateArgs, Transform};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input.
    Usage(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<fgc_core::Error> for CliError {
    fn from(e: fgc_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FGC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|t| *t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "FGC_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn analysis_config(opts: &AnalysisOptions) -> Result<AnalysisConfig, CliError> {
    if !(opts.train_frac > 0.0 && opts.train_frac < 1.0) {
        return Err(CliError::Usage(format!(
            "--train-frac must lie in (0, 1), got {}",
            opts.train_frac
        )));
    }
    let semimetric = SemiMetricSpec::new(opts.deriv_order).map_err(|_| {
        CliError::Usage(format!(
            "--deriv-order must be 0, 1 or 2, got {}",
            opts.deriv_order
        ))
    })?;
    let search = match &opts.bandwidth_quantiles {
        Some(q) => BandwidthSearch::new(q.clone(), opts.min_active),
        None => BandwidthSearch::new(
            BandwidthSearch::default().quantiles().to_vec(),
            opts.min_active,
        ),
    }
    .map_err(|e| CliError::Usage(format!("--bandwidth-quantiles/--min-active: {e}")))?;
    Ok(AnalysisConfig {
        semimetric,
        kernel: KernelSpec::quadratic(),
        search,
        refresh_bandwidths: !opts.freeze_bandwidths,
    })
}

pub fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let config = analysis_config(&args.analysis)?;
    let delim = args.delimiter.byte();
    let x = ingest::read_curves(&args.x, delim)?;
    let y = ingest::read_curves(&args.y, delim)?;
    if x.len() != y.len() {
        return Err(CliError::Usage(format!(
            "series lengths differ: {} has {} curves, {} has {}",
            args.x.display(),
            x.len(),
            args.y.display(),
            y.len()
        )));
    }
    let (plan, fraction) = match args.analysis.n_train {
        Some(k) => (WindowPlan::new(x.len(), k), None),
        None => (
            WindowPlan::from_fraction(x.len(), args.analysis.train_frac),
            Some(args.analysis.train_frac),
        ),
    };
    let plan = plan.map_err(|e| CliError::Usage(format!("training window: {e}")))?;
    let result = run_expanding_window(&x, &y, plan, &config)?;
    let text = report::render(
        &result,
        &config,
        &Inputs {
            x_path: &args.x,
            y_path: &args.y,
            train_fraction: fraction,
        },
    );
    match &args.out {
        Some(out) => {
            write_atomic(out, &text)?;
            write_atomic(&steps_path(out), &report::steps_csv(&result))?;
        }
        None => print!("{text}"),
    }
    println!("{}", report::summary_line(&result));
    Ok(())
}

pub fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    if args.analysis.n_train.is_some() {
        return Err(CliError::Usage(
            "--n-train is not supported by simulate; use --train-frac".to_string(),
        ));
    }
    let analysis = analysis_config(&args.analysis)?;
    let plan = McPlan {
        n_values: args.n,
        p_values: args.p,
        replications: args.reps,
        train_fraction: args.analysis.train_frac,
        master_seed: args.seed,
    };
    plan.validate()?;
    let template = SimConfig {
        burn_in: args.burn_in,
        noise_scale: args.noise_scale,
        ..SimConfig::default()
    };
    let result = run_monte_carlo(&plan, &template, &analysis)?;
    write_atomic(&args.out, &result.to_csv())?;
    for c in &result.cells {
        println!(
            "n={} p={}: GcGMC(Y) > GcGMC(X) in {}/{}, X Granger-causes Y in {}/{} ({} undefined)",
            c.n,
            c.p,
            c.count_predictable,
            c.replications,
            c.count_causal,
            c.replications,
            c.undefined_count
        );
    }
    Ok(())
}

pub fn preprocess(args: PreprocessArgs) -> Result<(), CliError> {
    let delim = args.delimiter.byte();
    let input = ingest::read_curves(&args.input, delim)?;
    let output = match args.transform {
        Transform::LogReturns => {
            if args.cpi.is_some() {
                return Err(CliError::Usage(
                    "--cpi only applies to cpi-normalize".to_string(),
                ));
            }
            let placement = if args.midpoint {
                ReturnPlacement::Midpoint
            } else {
                ReturnPlacement::Left
            };
            ingest::log_returns_with(&input, placement)?
        }
        Transform::CpiNormalize => {
            let cpi_path = args.cpi.as_ref().ok_or_else(|| {
                CliError::Usage("cpi-normalize requires --cpi <file>".to_string())
            })?;
            let cpi = ingest::read_curves(cpi_path, delim)?;
            ingest::cpi_normalize(&input, &cpi)?
        }
    };
    write_atomic(&args.out, &format_curves(&output, delim))?;
    Ok(())
}
