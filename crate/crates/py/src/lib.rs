//! Python bindings: `import fgc`.
//!
//! Curves cross the boundary as plain float sequences (lists or 1-D numpy
//! arrays); a series is a `CurveSeries` object built from a grid and rows.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fgc_core::gcgmc::{self, run_expanding_window};
use fgc_core::ingest::{self, ReturnPlacement};
use fgc_core::{fda, nw, simulator};
use fgc_core::{
    AnalysisConfig, BandwidthSearch, Curve, Grid, KernelSpec, McPlan, SemiMetricSpec, SimConfig,
    WindowPlan,
};

fn to_py(e: fgc_core::Error) -> PyErr {
    match e {
        fgc_core::Error::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn delimiter(d: &str) -> PyResult<u8> {
    match d {
        "," => Ok(b','),
        "\t" => Ok(b'\t'),
        other => Err(PyValueError::new_err(format!(
            "delimiter must be ',' or '\\t', got {other:?}"
        ))),
    }
}

fn semimetric(order: u8) -> PyResult<SemiMetricSpec> {
    SemiMetricSpec::new(order).map_err(to_py)
}

fn search(quantiles: Option<Vec<f64>>, min_active: usize) -> PyResult<BandwidthSearch> {
    let q = quantiles.unwrap_or_else(|| BandwidthSearch::default().quantiles().to_vec());
    BandwidthSearch::new(q, min_active).map_err(to_py)
}

fn curve(grid: &Grid, values: Vec<f64>) -> PyResult<Curve> {
    Curve::new(grid.clone(), values).map_err(to_py)
}

/// Time-ordered curves on a shared grid.
#[pyclass(name = "CurveSeries", module = "fgc", frozen)]
struct PyCurveSeries {
    inner: fgc_core::CurveSeries,
}

#[pymethods]
impl PyCurveSeries {
    #[new]
    #[pyo3(signature = (grid, rows, label = "series".to_string()))]
    fn new(grid: Vec<f64>, rows: Vec<Vec<f64>>, label: String) -> PyResult<Self> {
        let g = Grid::new(grid).map_err(to_py)?;
        let inner = fgc_core::CurveSeries::from_rows(g, rows, label).map_err(to_py)?;
        Ok(PyCurveSeries { inner })
    }

    #[getter]
    fn grid(&self) -> Vec<f64> {
        self.inner.grid().points().to_vec()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows().map(<[f64]>::to_vec).collect()
    }

    fn curve(&self, t: usize) -> PyResult<Vec<f64>> {
        if t >= self.inner.len() {
            return Err(PyValueError::new_err(format!(
                "curve index {t} out of range for {} curves",
                self.inner.len()
            )));
        }
        Ok(self.inner.curve(t).values().to_vec())
    }

    fn scaled(&self, c: f64) -> Self {
        PyCurveSeries {
            inner: self.inner.scaled(c),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "CurveSeries(label={:?}, curves={}, grid_points={})",
            self.inner.label(),
            self.inner.len(),
            self.inner.grid().len()
        )
    }
}

/// One forecast step in one direction.
#[pyclass(name = "ForecastRecord", module = "fgc", frozen, get_all)]
struct PyForecastRecord {
    time_index: usize,
    realized: Vec<f64>,
    auto_forecast: Vec<f64>,
    cross_forecast: Vec<f64>,
    ise_auto: f64,
    ise_cross: f64,
    bandwidth_auto: f64,
    bandwidth_cross: f64,
}

impl From<&fgc_core::ForecastRecord> for PyForecastRecord {
    fn from(r: &fgc_core::ForecastRecord) -> Self {
        PyForecastRecord {
            time_index: r.time_index,
            realized: r.realized.values().to_vec(),
            auto_forecast: r.auto_forecast.values().to_vec(),
            cross_forecast: r.cross_forecast.values().to_vec(),
            ise_auto: r.ise_auto,
            ise_cross: r.ise_cross,
            bandwidth_auto: r.bandwidth_auto,
            bandwidth_cross: r.bandwidth_cross,
        }
    }
}

/// Result of `analyze`.
#[pyclass(name = "Report", module = "fgc", frozen)]
struct PyReport {
    inner: fgc_core::GcGmcReport,
}

#[pymethods]
impl PyReport {
    /// `None` when undefined.
    #[getter]
    fn gcgmc_x(&self) -> Option<f64> {
        self.inner.gcgmc_x
    }

    #[getter]
    fn gcgmc_y(&self) -> Option<f64> {
        self.inner.gcgmc_y
    }

    /// One of `XCausesY`, `YCausesX`, `YMorePredictable`, `XMorePredictable`, `Indeterminate`.
    #[getter]
    fn decision(&self) -> &'static str {
        self.inner.decision.as_str()
    }

    #[getter]
    fn summary(&self) -> String {
        self.inner
            .decision
            .describe(&self.inner.x_label, &self.inner.y_label)
    }

    #[getter]
    fn n_train_initial(&self) -> usize {
        self.inner.plan.n_train_initial()
    }

    #[getter]
    fn records_x(&self) -> Vec<PyForecastRecord> {
        self.inner.records_x.iter().map(Into::into).collect()
    }

    #[getter]
    fn records_y(&self) -> Vec<PyForecastRecord> {
        self.inner.records_y.iter().map(Into::into).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(decision={}, gcgmc_x={:?}, gcgmc_y={:?})",
            self.inner.decision, self.inner.gcgmc_x, self.inner.gcgmc_y
        )
    }
}

#[pyfunction]
fn trapezoid(values: Vec<f64>, grid: Vec<f64>) -> PyResult<f64> {
    let g = Grid::new(grid).map_err(to_py)?;
    fda::trapezoid_integral(&values, &g).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (values, grid, order = 2))]
fn derivative(values: Vec<f64>, grid: Vec<f64>, order: u8) -> PyResult<Vec<f64>> {
    let g = Grid::new(grid).map_err(to_py)?;
    let d = fda::derivative(&curve(&g, values)?, order).map_err(to_py)?;
    Ok(d.into_values())
}

#[pyfunction]
#[pyo3(signature = (a, b, grid, derivative_order = 2))]
fn semi_metric(a: Vec<f64>, b: Vec<f64>, grid: Vec<f64>, derivative_order: u8) -> PyResult<f64> {
    let g = Grid::new(grid).map_err(to_py)?;
    fda::semi_metric(
        &curve(&g, a)?,
        &curve(&g, b)?,
        semimetric(derivative_order)?,
    )
    .map_err(to_py)
}

/// Quadratic kernel `1.5 (1 - t²)` on `[0, 1]`, zero elsewhere.
#[pyfunction]
fn kernel(t: f64) -> f64 {
    KernelSpec::quadratic().eval(t)
}

#[pyfunction]
#[pyo3(signature = (predictors, responses, x_new, bandwidth, derivative_order = 2))]
fn nw_predict(
    predictors: &PyCurveSeries,
    responses: &PyCurveSeries,
    x_new: Vec<f64>,
    bandwidth: f64,
    derivative_order: u8,
) -> PyResult<Vec<f64>> {
    let model = fgc_core::NwModel::new(
        predictors.inner.clone(),
        responses.inner.clone(),
        bandwidth,
        semimetric(derivative_order)?,
        KernelSpec::quadratic(),
    )
    .map_err(to_py)?;
    let x = curve(predictors.inner.grid(), x_new)?;
    Ok(model.predict(&x).map_err(to_py)?.into_values())
}

#[pyfunction]
#[pyo3(signature = (series, x_new, bandwidth, derivative_order = 2))]
fn nw_autopredict(
    series: &PyCurveSeries,
    x_new: Vec<f64>,
    bandwidth: f64,
    derivative_order: u8,
) -> PyResult<Vec<f64>> {
    let x = curve(series.inner.grid(), x_new)?;
    let out = nw::nw_autopredict(
        &series.inner,
        bandwidth,
        semimetric(derivative_order)?,
        KernelSpec::quadratic(),
        &x,
    )
    .map_err(to_py)?;
    Ok(out.into_values())
}

/// Returns `{"bandwidth", "cv_score", "degenerate"}`.
#[pyfunction]
#[pyo3(signature = (predictors, responses, derivative_order = 2, quantiles = None, min_active = 1))]
fn select_bandwidth<'py>(
    py: Python<'py>,
    predictors: &PyCurveSeries,
    responses: &PyCurveSeries,
    derivative_order: u8,
    quantiles: Option<Vec<f64>>,
    min_active: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let s = search(quantiles, min_active)?;
    let spec = semimetric(derivative_order)?;
    let choice = py
        .detach(|| {
            nw::select_bandwidth(
                &predictors.inner,
                &responses.inner,
                &s,
                spec,
                KernelSpec::quadratic(),
            )
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("bandwidth", choice.bandwidth)?;
    d.set_item("cv_score", choice.cv_score)?;
    d.set_item("degenerate", choice.degenerate)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (
    x,
    y,
    train_frac = 0.8,
    n_train = None,
    derivative_order = 2,
    refresh_bandwidths = true,
    quantiles = None,
    min_active = 1,
))]
#[allow(clippy::too_many_arguments)]
fn analyze(
    py: Python<'_>,
    x: &PyCurveSeries,
    y: &PyCurveSeries,
    train_frac: f64,
    n_train: Option<usize>,
    derivative_order: u8,
    refresh_bandwidths: bool,
    quantiles: Option<Vec<f64>>,
    min_active: usize,
) -> PyResult<PyReport> {
    let config = AnalysisConfig {
        semimetric: semimetric(derivative_order)?,
        kernel: KernelSpec::quadratic(),
        search: search(quantiles, min_active)?,
        refresh_bandwidths,
    };
    let n = x.inner.len();
    let plan = match n_train {
        Some(k) => WindowPlan::new(n, k),
        None => WindowPlan::from_fraction(n, train_frac),
    }
    .map_err(to_py)?;
    let inner = py
        .detach(|| run_expanding_window(&x.inner, &y.inner, plan, &config))
        .map_err(to_py)?;
    Ok(PyReport { inner })
}

/// `1 - cross / auto`, or `None` when `auto` is not positive.
#[pyfunction]
fn gcgmc_from_sums(cross: f64, auto: f64) -> Option<f64> {
    gcgmc::gcgmc_from_sums(cross, auto)
}

#[pyfunction]
#[pyo3(signature = (n, p, seed = 0, noise_scale = 0.1, burn_in = 50))]
fn simulate_pair(
    py: Python<'_>,
    n: usize,
    p: usize,
    seed: u64,
    noise_scale: f64,
    burn_in: usize,
) -> PyResult<(PyCurveSeries, PyCurveSeries)> {
    let config = SimConfig {
        n,
        p,
        seed,
        noise_scale,
        burn_in,
        ..SimConfig::default()
    };
    let (x, y) = py
        .detach(|| simulator::simulate_pair(&config))
        .map_err(to_py)?;
    Ok((PyCurveSeries { inner: x }, PyCurveSeries { inner: y }))
}

/// One dict per `(n, p)` cell with the decision counts.
#[pyfunction]
#[pyo3(signature = (n_values, p_values, replications, seed = 0, train_frac = 0.8, noise_scale = 0.1, derivative_order = 2))]
#[allow(clippy::too_many_arguments)]
fn run_monte_carlo<'py>(
    py: Python<'py>,
    n_values: Vec<usize>,
    p_values: Vec<usize>,
    replications: usize,
    seed: u64,
    train_frac: f64,
    noise_scale: f64,
    derivative_order: u8,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let plan = McPlan {
        n_values,
        p_values,
        replications,
        train_fraction: train_frac,
        master_seed: seed,
    };
    let template = SimConfig {
        noise_scale,
        ..SimConfig::default()
    };
    let analysis = AnalysisConfig {
        semimetric: semimetric(derivative_order)?,
        ..AnalysisConfig::default()
    };
    let result = py
        .detach(|| simulator::run_monte_carlo(&plan, &template, &analysis))
        .map_err(to_py)?;
    result
        .cells
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("n", c.n)?;
            d.set_item("p", c.p)?;
            d.set_item("count_predictable", c.count_predictable)?;
            d.set_item("count_causal", c.count_causal)?;
            d.set_item("replications", c.replications)?;
            d.set_item("undefined_count", c.undefined_count)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (path, delimiter = ","))]
fn read_curves(path: PathBuf, delimiter: &str) -> PyResult<PyCurveSeries> {
    let inner = ingest::read_curves(path, self::delimiter(delimiter)?).map_err(to_py)?;
    Ok(PyCurveSeries { inner })
}

#[pyfunction]
#[pyo3(signature = (series, path, delimiter = ","))]
fn write_curves(series: &PyCurveSeries, path: PathBuf, delimiter: &str) -> PyResult<()> {
    ingest::write_curves(&series.inner, path, self::delimiter(delimiter)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (prices, midpoint = false))]
fn log_returns(prices: &PyCurveSeries, midpoint: bool) -> PyResult<PyCurveSeries> {
    let placement = if midpoint {
        ReturnPlacement::Midpoint
    } else {
        ReturnPlacement::Left
    };
    let inner = ingest::log_returns_with(&prices.inner, placement).map_err(to_py)?;
    Ok(PyCurveSeries { inner })
}

#[pyfunction]
fn cpi_normalize(prices: &PyCurveSeries, cpi: &PyCurveSeries) -> PyResult<PyCurveSeries> {
    let inner = ingest::cpi_normalize(&prices.inner, &cpi.inner).map_err(to_py)?;
    Ok(PyCurveSeries { inner })
}

#[pymodule]
fn fgc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurveSeries>()?;
    m.add_class::<PyForecastRecord>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(trapezoid, m)?)?;
    m.add_function(wrap_pyfunction!(derivative, m)?)?;
    m.add_function(wrap_pyfunction!(semi_metric, m)?)?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(nw_predict, m)?)?;
    m.add_function(wrap_pyfunction!(nw_autopredict, m)?)?;
    m.add_function(wrap_pyfunction!(select_bandwidth, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(gcgmc_from_sums, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_pair, m)?)?;
    m.add_function(wrap_pyfunction!(run_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(read_curves, m)?)?;
    m.add_function(wrap_pyfunction!(write_curves, m)?)?;
    m.add_function(wrap_pyfunction!(log_returns, m)?)?;
    m.add_function(wrap_pyfunction!(cpi_normalize, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
