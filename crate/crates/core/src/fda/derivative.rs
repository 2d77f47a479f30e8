//! Finite-difference derivatives on the observation grid.
//!
//! Interior points use three-point central stencils (non-uniform spacing
//! allowed). Endpoints use one-sided stencils that are second-order accurate:
//! three points for the first derivative and four points for the second
//! derivative (three when the grid has only three points).

use super::types::{Curve, Grid};
use crate::error::{Error, Result};

/// Pointwise estimate of `f''` on the curve's own grid.
pub fn second_derivative(curve: &Curve) -> Result<Curve> {
    derivative(curve, 2)
}

/// Pointwise estimate of `f'` on the curve's own grid.
pub fn first_derivative(curve: &Curve) -> Result<Curve> {
    derivative(curve, 1)
}

/// Derivative of order 0, 1 or 2; order 0 returns a copy.
pub fn derivative(curve: &Curve, order: u8) -> Result<Curve> {
    let grid = curve.grid();
    if grid.len() < Grid::MIN_POINTS {
        return Err(Error::invalid(format!(
            "derivative needs at least {} grid points, got {}",
            Grid::MIN_POINTS,
            grid.len()
        )));
    }
    let values = derivative_values(curve.values(), grid.points(), order)?;
    Ok(Curve::from_parts(grid.clone(), values))
}

pub(crate) fn derivative_values(f: &[f64], u: &[f64], order: u8) -> Result<Vec<f64>> {
    match order {
        0 => Ok(f.to_vec()),
        1 => Ok(first_values(f, u)),
        2 => Ok(second_values(f, u)),
        q => Err(Error::invalid(format!(
            "derivative order must be 0, 1 or 2, got {q}"
        ))),
    }
}

fn first_values(f: &[f64], u: &[f64]) -> Vec<f64> {
    let m = u.len();
    let mut out = vec![0.0; m];
    for i in 1..m - 1 {
        let h1 = u[i] - u[i - 1];
        let h2 = u[i + 1] - u[i];
        out[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1]
            + (h2 - h1) / (h1 * h2) * f[i]
            + h1 / (h2 * (h1 + h2)) * f[i + 1];
    }
    out[0] = apply(&lagrange_weights(&u[..3], u[0], 1), &f[..3]);
    out[m - 1] = apply(&lagrange_weights(&u[m - 3..], u[m - 1], 1), &f[m - 3..]);
    out
}

fn second_values(f: &[f64], u: &[f64]) -> Vec<f64> {
    let m = u.len();
    let mut out = vec![0.0; m];
    for i in 1..m - 1 {
        let h1 = u[i] - u[i - 1];
        let h2 = u[i + 1] - u[i];
        out[i] =
            2.0 * (f[i - 1] / (h1 * (h1 + h2)) - f[i] / (h1 * h2) + f[i + 1] / (h2 * (h1 + h2)));
    }
    let k = m.min(4);
    out[0] = apply(&lagrange_weights(&u[..k], u[0], 2), &f[..k]);
    out[m - 1] = apply(&lagrange_weights(&u[m - k..], u[m - 1], 2), &f[m - k..]);
    out
}

fn apply(w: &[f64], f: &[f64]) -> f64 {
    w.iter().zip(f).map(|(a, b)| a * b).sum()
}

/// Weights `w_j` with `p^(order)(x) = Σ w_j f(nodes_j)` for the interpolating
/// polynomial through `nodes` (order 1 or 2, at most a handful of nodes).
fn lagrange_weights(nodes: &[f64], x: f64, order: u8) -> Vec<f64> {
    let k = nodes.len();
    (0..k)
        .map(|j| {
            let denom: f64 = (0..k)
                .filter(|&m| m != j)
                .map(|m| nodes[j] - nodes[m])
                .product();
            let others: Vec<usize> = (0..k).filter(|&m| m != j).collect();
            let numer: f64 = match order {
                1 => others
                    .iter()
                    .map(|&a| {
                        others
                            .iter()
                            .filter(|&&m| m != a)
                            .map(|&m| x - nodes[m])
                            .product::<f64>()
                    })
                    .sum(),
                _ => {
                    let mut s = 0.0;
                    for &a in &others {
                        for &b in &others {
                            if b == a {
                                continue;
                            }
                            s += others
                                .iter()
                                .filter(|&&m| m != a && m != b)
                                .map(|&m| x - nodes[m])
                                .product::<f64>();
                        }
                    }
                    s
                }
            };
            numer / denom
        })
        .collect()
}
