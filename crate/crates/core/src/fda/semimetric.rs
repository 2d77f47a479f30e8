use super::derivative::derivative_values;
use super::quadrature::{trapezoid_weights, weighted_sq_dist};
use super::types::{Curve, CurveSeries, Grid};
use crate::error::{Error, Result};

/// Which derivative the semi-metric compares: 0 gives the plain L² distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SemiMetricSpec {
    derivative_order: u8,
}

impl SemiMetricSpec {
    pub fn new(derivative_order: u8) -> Result<Self> {
        if derivative_order > 2 {
            return Err(Error::invalid(format!(
                "derivative_order must be 0, 1 or 2, got {derivative_order}"
            )));
        }
        Ok(SemiMetricSpec { derivative_order })
    }

    pub fn l2() -> Self {
        SemiMetricSpec {
            derivative_order: 0,
        }
    }

    pub fn derivative_order(&self) -> u8 {
        self.derivative_order
    }
}

impl Default for SemiMetricSpec {
    fn default() -> Self {
        SemiMetricSpec {
            derivative_order: 2,
        }
    }
}

/// `sqrt(∫ (D^q x1 - D^q x2)²)` with `q` the configured derivative order.
pub fn semi_metric(x1: &Curve, x2: &Curve, spec: SemiMetricSpec) -> Result<f64> {
    x1.grid().ensure_same(x2.grid(), "semi_metric")?;
    let grid = x1.grid();
    let u = grid.points();
    let q = spec.derivative_order();
    let a = derivative_values(x1.values(), u, q)?;
    let b = derivative_values(x2.values(), u, q)?;
    Ok(weighted_sq_dist(&a, &b, &trapezoid_weights(grid)).sqrt())
}

/// Derivative-transformed curves with quadrature weights, so repeated
/// distance evaluations skip the differentiation step.
#[derive(Clone, Debug)]
pub(crate) struct TransformedCurves {
    grid: Grid,
    spec: SemiMetricSpec,
    weights: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl TransformedCurves {
    pub fn from_series(series: &CurveSeries, spec: SemiMetricSpec) -> Self {
        let grid = series.grid().clone();
        let u = grid.points();
        let rows = series
            .rows()
            .map(|r| {
                derivative_values(r, u, spec.derivative_order()).expect("order validated by spec")
            })
            .collect();
        TransformedCurves {
            weights: trapezoid_weights(&grid),
            grid,
            spec,
            rows,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn transform(&self, curve: &Curve) -> Result<Vec<f64>> {
        self.grid
            .ensure_same(curve.grid(), "semi-metric evaluation point")?;
        derivative_values(
            curve.values(),
            self.grid.points(),
            self.spec.derivative_order(),
        )
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        weighted_sq_dist(&self.rows[i], &self.rows[j], &self.weights).sqrt()
    }

    /// Distances from an already-transformed point to rows `0..limit`.
    pub fn distances_to(&self, transformed: &[f64], limit: usize) -> Vec<f64> {
        self.rows[..limit]
            .iter()
            .map(|r| weighted_sq_dist(r, transformed, &self.weights).sqrt())
            .collect()
    }

    /// Full symmetric distance matrix, row-major.
    pub fn distance_matrix(&self) -> DistanceMatrix {
        DistanceMatrix::from_fn(self.len(), |i, j| self.distance(i, j))
    }
}

/// Dense symmetric matrix of pairwise semi-metric distances.
#[derive(Clone, Debug)]
pub(crate) struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        DistanceMatrix { n, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Row `i` restricted to the first `limit` columns.
    pub fn row(&self, i: usize, limit: usize) -> &[f64] {
        &self.data[i * self.n..i * self.n + limit]
    }
}
