//! Granger-causal direction between two stationary curve time series.
//!
//! The crate is organised bottom-up:
//!
//! - [`fda`]: grids, curves, quadrature, finite-difference derivatives,
//!   semi-metrics and the quadratic kernel.
//! - [`nw`]: functional Nadaraya-Watson regression (cross and lag-1 auto
//!   models) with leave-one-out bandwidth selection.
//! - [`gcgmc`]: the expanding-window forecast harness and the GcGMC pair.
//! - [`simulator`]: the bivariate FAR(1)-driven generating process and the
//!   Monte Carlo experiment over sample sizes and grid resolutions.
//! - [`ingest`]: delimited curve files, log returns and CPI normalisation.

pub mod error;
pub mod fda;
pub mod gcgmc;
pub mod ingest;
pub mod nw;
pub mod simulator;

pub use error::{Error, Result};
pub use fda::{Curve, CurveSeries, Grid, KernelSpec, SemiMetricSpec};
pub use gcgmc::{AnalysisConfig, Decision, ForecastRecord, GcGmcReport, WindowPlan};
pub use nw::{BandwidthChoice, BandwidthSearch, NwModel};
pub use simulator::{McCell, McPlan, McResult, SimConfig};
