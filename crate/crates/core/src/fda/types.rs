use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered sample locations of a function support.
///
/// Cloning is cheap: the points are shared.
#[derive(Clone)]
pub struct Grid {
    points: Arc<[f64]>,
}

impl Grid {
    pub const MIN_POINTS: usize = 3;

    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < Self::MIN_POINTS {
            return Err(Error::invalid(format!(
                "grid needs at least {} points, got {}",
                Self::MIN_POINTS,
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("grid point {i} is not finite")));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "grid is not strictly increasing at point {} ({} -> {})",
                i + 1,
                points[i],
                points[i + 1]
            )));
        }
        Ok(Grid {
            points: points.into(),
        })
    }

    /// `len` equally spaced points from `start` to `end` inclusive.
    pub fn uniform(start: f64, end: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::invalid(format!(
                "grid needs at least {} points, got {len}",
                Self::MIN_POINTS
            )));
        }
        let step = (end - start) / (len - 1) as f64;
        let points = (0..len)
            .map(|i| {
                if i == len - 1 {
                    end
                } else {
                    start + step * i as f64
                }
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Same sample locations (pointer equality first, then values).
    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points[..] == other.points[..]
    }

    pub(crate) fn ensure_same(&self, other: &Grid, what: &str) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{what}: grids differ ({} points on [{}, {}] vs {} points on [{}, {}])",
                self.len(),
                self.start(),
                self.end(),
                other.len(),
                other.start(),
                other.end()
            )))
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("len", &self.len())
            .field("start", &self.start())
            .field("end", &self.end())
            .finish()
    }
}

/// One functional observation sampled on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    grid: Grid,
    values: Vec<f64>,
}

impl Curve {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "curve has {} values but its grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("curve value {i} is not finite")));
        }
        Ok(Curve { grid, values })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&u| f(u)).collect();
        Self::new(grid.clone(), values)
    }

    pub fn zeros(grid: &Grid) -> Self {
        Curve {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    /// Skips the finiteness check; callers guarantee `values.len() == grid.len()`.
    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Curve { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Curve {
        Curve::from_parts(
            self.grid.clone(),
            self.values.iter().map(|v| v * c).collect(),
        )
    }
}

/// Time-ordered curves on one shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSeries {
    grid: Grid,
    curves: Vec<Curve>,
    label: String,
}

impl CurveSeries {
    /// Minimum length for an expanding-window analysis.
    pub const MIN_ANALYSIS_LEN: usize = 4;

    /// Builds a non-empty series. Analysis entry points additionally require
    /// [`Self::MIN_ANALYSIS_LEN`] curves; regression windows may be shorter.
    pub fn new(grid: Grid, curves: Vec<Curve>, label: impl Into<String>) -> Result<Self> {
        if curves.is_empty() {
            return Err(Error::invalid("curve series is empty"));
        }
        for (t, c) in curves.iter().enumerate() {
            grid.ensure_same(c.grid(), &format!("curve {t} of series"))?;
        }
        Ok(CurveSeries {
            grid,
            curves,
            label: label.into(),
        })
    }

    /// One curve per row of `rows`, each on `grid`.
    pub fn from_rows(grid: Grid, rows: Vec<Vec<f64>>, label: impl Into<String>) -> Result<Self> {
        let curves = rows
            .into_iter()
            .enumerate()
            .map(|(t, r)| {
                Curve::new(grid.clone(), r).map_err(|e| Error::invalid(format!("row {t}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, curves, label)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve(&self, t: usize) -> &Curve {
        &self.curves[t]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Curves `range` as a new series (same grid and label).
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<CurveSeries> {
        if range.end > self.len() || range.start >= range.end {
            return Err(Error::invalid(format!(
                "slice {}..{} out of range for series of length {}",
                range.start,
                range.end,
                self.len()
            )));
        }
        Ok(CurveSeries {
            grid: self.grid.clone(),
            curves: self.curves[range].to_vec(),
            label: self.label.clone(),
        })
    }

    pub fn scaled(&self, c: f64) -> CurveSeries {
        CurveSeries {
            grid: self.grid.clone(),
            curves: self.curves.iter().map(|x| x.scaled(c)).collect(),
            label: self.label.clone(),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.curves.iter().map(Curve::values)
    }

    pub(crate) fn ensure_analysis_len(&self) -> Result<()> {
        if self.len() < Self::MIN_ANALYSIS_LEN {
            return Err(Error::invalid(format!(
                "series '{}' has {} curves; at least {} are required",
                self.label,
                self.len(),
                Self::MIN_ANALYSIS_LEN
            )));
        }
        Ok(())
    }
}
