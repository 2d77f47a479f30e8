//! Trapezoidal quadrature on (possibly non-uniform) observation grids.

use super::types::Grid;
use crate::error::{Error, Result};

/// Trapezoidal approximation of the integral of `values` over the grid span.
pub fn trapezoid_integral(values: &[f64], grid: &Grid) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::invalid(format!(
            "trapezoid_integral: {} values for a {}-point grid",
            values.len(),
            grid.len()
        )));
    }
    Ok(trapezoid_unchecked(values, grid.points()))
}

pub(crate) fn trapezoid_unchecked(values: &[f64], points: &[f64]) -> f64 {
    points
        .windows(2)
        .zip(values.windows(2))
        .map(|(u, f)| 0.5 * (u[1] - u[0]) * (f[0] + f[1]))
        .sum()
}

/// Per-point weights `w` such that the trapezoid integral of `f` is `Σ w_i f_i`.
pub fn trapezoid_weights(grid: &Grid) -> Vec<f64> {
    let u = grid.points();
    let m = u.len();
    let mut w = vec![0.0; m];
    for i in 0..m - 1 {
        let half = 0.5 * (u[i + 1] - u[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    w
}

/// Integrated squared difference `∫ (a - b)²` by the trapezoid rule.
pub fn integrated_squared_error(a: &[f64], b: &[f64], grid: &Grid) -> Result<f64> {
    if a.len() != grid.len() || b.len() != grid.len() {
        return Err(Error::invalid(format!(
            "integrated_squared_error: curves of length {} and {} on a {}-point grid",
            a.len(),
            b.len(),
            grid.len()
        )));
    }
    let sq: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).collect();
    Ok(trapezoid_unchecked(&sq, grid.points()))
}

/// Weighted squared distance with precomputed trapezoid weights.
#[inline]
pub(crate) fn weighted_sq_dist(a: &[f64], b: &[f64], weights: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(weights)
        .map(|((x, y), w)| {
            let d = x - y;
            w * d * d
        })
        .sum()
}
