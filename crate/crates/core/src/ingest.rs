//! Curve files and price preprocessing.
//!
//! File layout (UTF-8 delimited text, comma or tab): the first row holds the
//! grid points, every following row is one curve, in time order. Numbers are
//! written in scientific notation with 17 significant digits, which
//! round-trips every `f64` exactly.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fda::{Curve, CurveSeries, Grid};

pub const DEFAULT_DELIMITER: u8 = b',';

/// Reads a curve file; the series label is the file stem.
pub fn read_curves(path: impl AsRef<Path>, delimiter: u8) -> Result<CurveSeries> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_curves(&text, delimiter, path, &label)
}

/// Parses curve-file text; `path` only labels error messages.
pub fn parse_curves(text: &str, delimiter: u8, path: &Path, label: &str) -> Result<CurveSeries> {
    let parse_err = |row: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        row,
        column,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut header: Option<Vec<f64>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(i + 1, 0, e.to_string()))?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| parse_err(line, j + 1, format!("'{cell}' is not a number")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(parse_err(line, j + 1, format!("'{cell}' is not finite")))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        match &header {
            None => {
                if let Some(j) = values.windows(2).position(|w| w[1] <= w[0]) {
                    return Err(parse_err(
                        line,
                        j + 2,
                        "grid row is not strictly increasing".to_string(),
                    ));
                }
                if values.len() < Grid::MIN_POINTS {
                    return Err(parse_err(
                        line,
                        values.len(),
                        format!("grid row needs at least {} points", Grid::MIN_POINTS),
                    ));
                }
                header = Some(values);
            }
            Some(h) => {
                if values.len() != h.len() {
                    return Err(parse_err(
                        line,
                        values.len().min(h.len()) + 1,
                        format!("row has {} cells, grid has {}", values.len(), h.len()),
                    ));
                }
                rows.push(values);
            }
        }
    }
    let header = header.ok_or_else(|| Error::Format {
        path: path.to_path_buf(),
        message: "file is empty".to_string(),
    })?;
    if rows.len() < CurveSeries::MIN_ANALYSIS_LEN {
        return Err(Error::Format {
            path: path.to_path_buf(),
            message: format!(
                "{} curve rows found; at least {} are required",
                rows.len(),
                CurveSeries::MIN_ANALYSIS_LEN
            ),
        });
    }
    let grid = Grid::new(header)?;
    CurveSeries::from_rows(grid, rows, label)
}

/// Formats one number with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Text form of a series in the curve-file layout.
pub fn format_curves(series: &CurveSeries, delimiter: u8) -> String {
    let sep = (delimiter as char).to_string();
    let line = |vals: &[f64]| {
        vals.iter()
            .map(|v| format_value(*v))
            .collect::<Vec<_>>()
            .join(&sep)
    };
    let mut out = line(series.grid().points());
    out.push('\n');
    for row in series.rows() {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

pub fn write_curves(series: &CurveSeries, path: impl AsRef<Path>, delimiter: u8) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_curves(series, delimiter)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Where return `i` (between grid points `i` and `i+1`) is placed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReturnPlacement {
    /// Left endpoint `u_i`.
    #[default]
    Left,
    /// Interval midpoint `(u_i + u_{i+1}) / 2`.
    Midpoint,
}

/// `r(u_i) = ln q(u_{i+1}) - ln q(u_i)` for each curve, on the left endpoints.
pub fn log_returns(prices: &CurveSeries) -> Result<CurveSeries> {
    log_returns_with(prices, ReturnPlacement::Left)
}

pub fn log_returns_with(prices: &CurveSeries, placement: ReturnPlacement) -> Result<CurveSeries> {
    let u = prices.grid().points();
    let m = u.len();
    if m < Grid::MIN_POINTS + 1 {
        return Err(Error::invalid(format!(
            "log returns need at least {} grid points, got {m}",
            Grid::MIN_POINTS + 1
        )));
    }
    for (t, row) in prices.rows().enumerate() {
        if let Some(i) = row.iter().position(|q| *q <= 0.0) {
            return Err(Error::invalid(format!(
                "nonpositive price {} at curve {t}, point {i}",
                row[i]
            )));
        }
    }
    let points = match placement {
        ReturnPlacement::Left => u[..m - 1].to_vec(),
        ReturnPlacement::Midpoint => u.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
    };
    let grid = Grid::new(points)?;
    let curves = prices
        .rows()
        .map(|row| {
            let r = row.windows(2).map(|q| q[1].ln() - q[0].ln()).collect();
            Curve::new(grid.clone(), r)
        })
        .collect::<Result<Vec<_>>>()?;
    CurveSeries::new(grid, curves, prices.label())
}

/// Pointwise `price · (100 / cpi)`, exact when the CPI is 100.
pub fn cpi_normalize(prices: &CurveSeries, cpi: &CurveSeries) -> Result<CurveSeries> {
    prices.grid().ensure_same(cpi.grid(), "cpi_normalize")?;
    if prices.len() != cpi.len() {
        return Err(Error::invalid(format!(
            "price series has {} curves but CPI has {}",
            prices.len(),
            cpi.len()
        )));
    }
    let curves = prices
        .rows()
        .zip(cpi.rows())
        .enumerate()
        .map(|(t, (p, c))| {
            if let Some(i) = c.iter().position(|v| *v <= 0.0) {
                return Err(Error::invalid(format!(
                    "nonpositive CPI {} at curve {t}, point {i}",
                    c[i]
                )));
            }
            let vals = p.iter().zip(c).map(|(p, c)| p * (100.0 / c)).collect();
            Curve::new(prices.grid().clone(), vals)
        })
        .collect::<Result<Vec<_>>>()?;
    CurveSeries::new(prices.grid().clone(), curves, prices.label())
}
