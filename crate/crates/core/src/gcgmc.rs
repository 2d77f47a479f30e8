//! Expanding-window one-step-ahead forecasts and the GcGMC pair.
//!
//! For a target index `t` the training window is curves `0..t`. In the
//! Y-direction the auto forecast regresses `Y` on its own lag and evaluates at
//! `Y_{t-1}`; the cross forecast regresses `Y_s` on `X_s` and evaluates at the
//! auto forecast `X̂_t` of `X`. The X-direction swaps roles. Then
//!
//! ```text
//! GcGMC(Y) = 1 - Σ_t ISE(Y_t, cross) / Σ_t ISE(Y_t, auto)
//! ```
//!
//! A positive value means the other series improves the forecast.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fda::{
    trapezoid_unchecked, trapezoid_weights, weighted_sq_dist, Curve, CurveSeries, DistanceMatrix,
    KernelSpec, SemiMetricSpec, TransformedCurves,
};
use crate::nw::{
    kernel_weights, loocv_select, weighted_average, BandwidthSearch, DEGENERATE_BANDWIDTH,
};

/// Initial training size and total length of an expanding-window run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowPlan {
    n_total: usize,
    n_train_initial: usize,
}

impl WindowPlan {
    pub fn new(n_total: usize, n_train_initial: usize) -> Result<Self> {
        if n_train_initial < 2 || n_train_initial >= n_total {
            return Err(Error::invalid(format!(
                "window plan needs 2 <= n_train_initial < n_total, got n_train_initial = {n_train_initial}, n_total = {n_total}"
            )));
        }
        Ok(WindowPlan {
            n_total,
            n_train_initial,
        })
    }

    /// Initial training size `round(fraction · n_total)`.
    pub fn from_fraction(n_total: usize, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::invalid(format!(
                "train fraction must lie in (0, 1), got {fraction}"
            )));
        }
        Self::new(n_total, (fraction * n_total as f64).round() as usize)
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn n_train_initial(&self) -> usize {
        self.n_train_initial
    }

    pub fn n_test(&self) -> usize {
        self.n_total - self.n_train_initial
    }

    /// Zero-based target indices.
    pub fn test_indices(&self) -> std::ops::Range<usize> {
        self.n_train_initial..self.n_total
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisConfig {
    pub semimetric: SemiMetricSpec,
    pub kernel: KernelSpec,
    pub search: BandwidthSearch,
    /// Re-select bandwidths on every window; otherwise select once on the
    /// initial window and keep them.
    pub refresh_bandwidths: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            semimetric: SemiMetricSpec::default(),
            kernel: KernelSpec::default(),
            search: BandwidthSearch::default(),
            refresh_bandwidths: true,
        }
    }
}

/// One test step in one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct ForecastRecord {
    /// Zero-based index of the forecast curve.
    pub time_index: usize,
    pub realized: Curve,
    pub auto_forecast: Curve,
    pub cross_forecast: Curve,
    pub ise_auto: f64,
    pub ise_cross: f64,
    pub bandwidth_auto: f64,
    pub bandwidth_cross: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    XCausesY,
    YCausesX,
    YMorePredictable,
    XMorePredictable,
    Indeterminate,
}

impl Decision {
    /// Leading/lagging call from the two GcGMC values; `None` means undefined.
    pub fn from_values(gcgmc_x: Option<f64>, gcgmc_y: Option<f64>) -> Decision {
        let (Some(gx), Some(gy)) = (gcgmc_x, gcgmc_y) else {
            return Decision::Indeterminate;
        };
        if gy > 0.0 && gx < 0.0 {
            Decision::XCausesY
        } else if gx > 0.0 && gy < 0.0 {
            Decision::YCausesX
        } else if gy > gx {
            Decision::YMorePredictable
        } else if gx > gy {
            Decision::XMorePredictable
        } else {
            Decision::Indeterminate
        }
    }

    /// The decision after exchanging the roles of X and Y.
    pub fn swapped(self) -> Decision {
        match self {
            Decision::XCausesY => Decision::YCausesX,
            Decision::YCausesX => Decision::XCausesY,
            Decision::YMorePredictable => Decision::XMorePredictable,
            Decision::XMorePredictable => Decision::YMorePredictable,
            Decision::Indeterminate => Decision::Indeterminate,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::XCausesY => "XCausesY",
            Decision::YCausesX => "YCausesX",
            Decision::YMorePredictable => "YMorePredictable",
            Decision::XMorePredictable => "XMorePredictable",
            Decision::Indeterminate => "Indeterminate",
        }
    }

    /// Human sentence using the series labels.
    pub fn describe(self, x_label: &str, y_label: &str) -> String {
        match self {
            Decision::XCausesY => format!("{x_label} Granger-causes {y_label}"),
            Decision::YCausesX => format!("{y_label} Granger-causes {x_label}"),
            Decision::YMorePredictable => {
                format!("{y_label} is more predictable than {x_label} (no causal direction)")
            }
            Decision::XMorePredictable => {
                format!("{x_label} is more predictable than {y_label} (no causal direction)")
            }
            Decision::Indeterminate => "indeterminate".to_string(),
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Decision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "XCausesY" => Decision::XCausesY,
            "YCausesX" => Decision::YCausesX,
            "YMorePredictable" => Decision::YMorePredictable,
            "XMorePredictable" => Decision::XMorePredictable,
            "Indeterminate" => Decision::Indeterminate,
            other => return Err(Error::invalid(format!("unknown decision '{other}'"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GcGmcReport {
    /// `None` when the X auto-forecast errors sum to zero.
    pub gcgmc_x: Option<f64>,
    pub gcgmc_y: Option<f64>,
    pub records_x: Vec<ForecastRecord>,
    pub records_y: Vec<ForecastRecord>,
    pub decision: Decision,
    pub x_label: String,
    pub y_label: String,
    pub plan: WindowPlan,
}

/// Auto-forecast error below this fraction of the realized curves' energy is
/// rounding noise and counts as zero.
pub const NEGLIGIBLE_AUTO_ERROR: f64 = 1e-20;

/// `1 - Σ ise_cross / Σ ise_auto`; `None` when the auto sum is zero (or
/// negligible next to `Σ ∫ realized²`).
pub fn gcgmc_from_records(records: &[ForecastRecord]) -> Option<f64> {
    let auto: f64 = records.iter().map(|r| r.ise_auto).sum();
    let cross: f64 = records.iter().map(|r| r.ise_cross).sum();
    let energy: f64 = records
        .iter()
        .map(|r| {
            let sq: Vec<f64> = r.realized.values().iter().map(|v| v * v).collect();
            trapezoid_unchecked(&sq, r.realized.grid().points())
        })
        .sum();
    if auto <= NEGLIGIBLE_AUTO_ERROR * energy {
        return None;
    }
    gcgmc_from_sums(cross, auto)
}

pub fn gcgmc_from_sums(cross: f64, auto: f64) -> Option<f64> {
    if auto > 0.0 {
        Some(1.0 - cross / auto)
    } else {
        None
    }
}

/// Forecasts of `Y_t` and `X_t` (zero-based `t`) from the window `0..t`.
///
/// Returns `(record for Y, record for X)`.
pub fn forecast_step(
    x_series: &CurveSeries,
    y_series: &CurveSeries,
    t: usize,
    config: &AnalysisConfig,
) -> Result<(ForecastRecord, ForecastRecord)> {
    check_pair(x_series, y_series)?;
    if t < 2 || t >= x_series.len() {
        return Err(Error::invalid(format!(
            "forecast index {t} out of range 2..{}",
            x_series.len()
        )));
    }
    let px = Prepared::new(x_series, config.semimetric);
    let py = Prepared::new(y_series, config.semimetric);
    let bw = Bandwidths::select(&px, &py, t, config);
    Ok(step(&px, &py, t, &bw, config.kernel))
}

/// Runs every test step of `plan` and assembles the report.
pub fn run_expanding_window(
    x_series: &CurveSeries,
    y_series: &CurveSeries,
    plan: WindowPlan,
    config: &AnalysisConfig,
) -> Result<GcGmcReport> {
    check_pair(x_series, y_series)?;
    x_series.ensure_analysis_len()?;
    if plan.n_total() != x_series.len() {
        return Err(Error::invalid(format!(
            "window plan covers {} curves but the series have {}",
            plan.n_total(),
            x_series.len()
        )));
    }
    let (px, py) = rayon::join(
        || Prepared::new(x_series, config.semimetric),
        || Prepared::new(y_series, config.semimetric),
    );
    let frozen = (!config.refresh_bandwidths)
        .then(|| Bandwidths::select(&px, &py, plan.n_train_initial(), config));

    let steps: Vec<(ForecastRecord, ForecastRecord)> = plan
        .test_indices()
        .into_par_iter()
        .map(|t| {
            let bw = match &frozen {
                Some(b) => *b,
                None => Bandwidths::select(&px, &py, t, config),
            };
            step(&px, &py, t, &bw, config.kernel)
        })
        .collect();
    let (records_y, records_x): (Vec<_>, Vec<_>) = steps.into_iter().unzip();

    let gcgmc_x = gcgmc_from_records(&records_x);
    let gcgmc_y = gcgmc_from_records(&records_y);
    Ok(GcGmcReport {
        gcgmc_x,
        gcgmc_y,
        decision: Decision::from_values(gcgmc_x, gcgmc_y),
        records_x,
        records_y,
        x_label: x_series.label().to_string(),
        y_label: y_series.label().to_string(),
        plan,
    })
}

fn check_pair(x: &CurveSeries, y: &CurveSeries) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "series lengths differ: X '{}' has {} curves, Y '{}' has {}",
            x.label(),
            x.len(),
            y.label(),
            y.len()
        )));
    }
    Ok(())
}

/// Per-series data reused across every window.
struct Prepared<'a> {
    series: &'a CurveSeries,
    transformed: TransformedCurves,
    distances: DistanceMatrix,
    quad: Vec<f64>,
}

impl<'a> Prepared<'a> {
    fn new(series: &'a CurveSeries, semimetric: SemiMetricSpec) -> Self {
        let transformed = TransformedCurves::from_series(series, semimetric);
        let distances = transformed.distance_matrix();
        Prepared {
            series,
            transformed,
            distances,
            quad: trapezoid_weights(series.grid()),
        }
    }

    fn rows(&self, range: std::ops::Range<usize>) -> Vec<&[f64]> {
        self.series.curves()[range]
            .iter()
            .map(Curve::values)
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Bandwidths {
    auto_x: f64,
    auto_y: f64,
    /// Y regressed on X.
    cross_y: f64,
    /// X regressed on Y.
    cross_x: f64,
}

impl Bandwidths {
    fn select(px: &Prepared, py: &Prepared, t: usize, config: &AnalysisConfig) -> Self {
        let auto = |p: &Prepared| select_or_sentinel(&p.distances, &p.rows(1..t), &p.quad, config);
        let cross = |pred: &Prepared, resp: &Prepared| {
            select_or_sentinel(&pred.distances, &resp.rows(0..t), &resp.quad, config)
        };
        Bandwidths {
            auto_x: auto(px),
            auto_y: auto(py),
            cross_y: cross(px, py),
            cross_x: cross(py, px),
        }
    }
}

/// LOOCV bandwidth, or the sentinel when a single pair forces the weights.
fn select_or_sentinel(
    dm: &DistanceMatrix,
    responses: &[&[f64]],
    quad: &[f64],
    config: &AnalysisConfig,
) -> f64 {
    if responses.len() < 2 {
        return DEGENERATE_BANDWIDTH;
    }
    loocv_select(dm, 0, responses, quad, &config.search, config.kernel).bandwidth
}

fn step(
    px: &Prepared,
    py: &Prepared,
    t: usize,
    bw: &Bandwidths,
    kernel: KernelSpec,
) -> (ForecastRecord, ForecastRecord) {
    let x_hat = auto_forecast(px, t, bw.auto_x, kernel);
    let y_hat = auto_forecast(py, t, bw.auto_y, kernel);
    let y_cross = cross_forecast(px, py, t, &x_hat, bw.cross_y, kernel);
    let x_cross = cross_forecast(py, px, t, &y_hat, bw.cross_x, kernel);
    let record = |p: &Prepared, auto: Vec<f64>, cross: Vec<f64>, b_auto: f64, b_cross: f64| {
        let realized = p.series.curve(t);
        let grid = p.series.grid().clone();
        ForecastRecord {
            time_index: t,
            ise_auto: weighted_sq_dist(&auto, realized.values(), &p.quad),
            ise_cross: weighted_sq_dist(&cross, realized.values(), &p.quad),
            realized: realized.clone(),
            auto_forecast: Curve::new(grid.clone(), auto).expect("finite forecast"),
            cross_forecast: Curve::new(grid, cross).expect("finite forecast"),
            bandwidth_auto: b_auto,
            bandwidth_cross: b_cross,
        }
    };
    (
        record(py, y_hat, y_cross, bw.auto_y, bw.cross_y),
        record(px, x_hat, x_cross, bw.auto_x, bw.cross_x),
    )
}

/// Lag-1 NW forecast of curve `t` evaluated at curve `t-1`.
fn auto_forecast(p: &Prepared, t: usize, bandwidth: f64, kernel: KernelSpec) -> Vec<f64> {
    // Predictors 0..t-1 paired with responses 1..t.
    let dists = p.distances.row(t - 1, t - 1);
    let w = kernel_weights(dists, bandwidth, kernel).weights;
    weighted_average(&w, &p.rows(1..t))
}

/// NW forecast of `resp` curve `t` from the regression on `pred` over `0..t`,
/// evaluated at the plug-in point `pred_hat`.
fn cross_forecast(
    pred: &Prepared,
    resp: &Prepared,
    t: usize,
    pred_hat: &[f64],
    bandwidth: f64,
    kernel: KernelSpec,
) -> Vec<f64> {
    let point = pred
        .transformed
        .transform(
            &Curve::new(pred.series.grid().clone(), pred_hat.to_vec()).expect("finite forecast"),
        )
        .expect("forecast lives on the predictor grid");
    let dists = pred.transformed.distances_to(&point, t);
    let w = kernel_weights(&dists, bandwidth, kernel).weights;
    weighted_average(&w, &resp.rows(0..t))
}
