//! Functional Nadaraya-Watson regression.
//!
//! The cross model regresses response curves on predictor curves taken at the
//! same time index; the auto model regresses a series on its own first lag.
//! Kernel weights are `K(d(X_t, x) / h)` normalised to sum to one, where `d` is
//! the derivative semi-metric and `K` the quadratic kernel on `[0, 1]`.
//!
//! When every weight vanishes (the evaluation point is at least `h` away from
//! all predictors) the bandwidth is inflated to `1.001 ×` the nearest distance
//! so that exactly the nearest predictors carry weight.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fda::{
    trapezoid_weights, weighted_sq_dist, Curve, CurveSeries, DistanceMatrix, KernelSpec,
    SemiMetricSpec, TransformedCurves,
};

/// Bandwidth multiplier applied to the nearest distance when no kernel weight
/// is positive.
pub const FALLBACK_INFLATION: f64 = 1.001;

/// Returned by [`select_bandwidth`] when all pairwise predictor distances are zero.
pub const DEGENERATE_BANDWIDTH: f64 = 1.0;

/// CV scores within this relative distance of the minimum are treated as tied.
pub const TIE_RELATIVE_TOLERANCE: f64 = 1e-10;

/// A fitted (memorised) Nadaraya-Watson model.
#[derive(Clone, Debug)]
pub struct NwModel {
    predictors: CurveSeries,
    responses: CurveSeries,
    bandwidth: f64,
    semimetric: SemiMetricSpec,
    kernel: KernelSpec,
    transformed: TransformedCurves,
}

impl NwModel {
    pub fn new(
        predictors: CurveSeries,
        responses: CurveSeries,
        bandwidth: f64,
        semimetric: SemiMetricSpec,
        kernel: KernelSpec,
    ) -> Result<Self> {
        if predictors.len() != responses.len() {
            return Err(Error::invalid(format!(
                "predictors ({}) and responses ({}) differ in length",
                predictors.len(),
                responses.len()
            )));
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::invalid(format!(
                "bandwidth must be positive and finite, got {bandwidth}"
            )));
        }
        let transformed = TransformedCurves::from_series(&predictors, semimetric);
        Ok(NwModel {
            predictors,
            responses,
            bandwidth,
            semimetric,
            kernel,
            transformed,
        })
    }

    pub fn predictors(&self) -> &CurveSeries {
        &self.predictors
    }

    pub fn responses(&self) -> &CurveSeries {
        &self.responses
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn semimetric(&self) -> SemiMetricSpec {
        self.semimetric
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    /// Normalised weights over the training pairs for evaluation point `x_new`.
    pub fn weights(&self, x_new: &Curve) -> Result<Vec<f64>> {
        let point = self.transformed.transform(x_new)?;
        let dists = self
            .transformed
            .distances_to(&point, self.transformed.len());
        Ok(kernel_weights(&dists, self.bandwidth, self.kernel).weights)
    }

    pub fn predict(&self, x_new: &Curve) -> Result<Curve> {
        let w = self.weights(x_new)?;
        let rows: Vec<&[f64]> = self.responses.rows().collect();
        let values = weighted_average(&w, &rows);
        Ok(Curve::new(self.responses.grid().clone(), values)
            .expect("convex combination of finite curves"))
    }
}

pub fn nw_predict(model: &NwModel, x_new: &Curve) -> Result<Curve> {
    model.predict(x_new)
}

/// Lag-1 autoregression: pairs `(X_t, X_{t+1})` for `t = 1..n-1`, evaluated at `x_new`.
pub fn nw_autopredict(
    series: &CurveSeries,
    bandwidth: f64,
    semimetric: SemiMetricSpec,
    kernel: KernelSpec,
    x_new: &Curve,
) -> Result<Curve> {
    let (pred, resp) = lagged_pairs(series)?;
    NwModel::new(pred, resp, bandwidth, semimetric, kernel)?.predict(x_new)
}

/// Splits a series into lag-1 predictor and response series.
pub fn lagged_pairs(series: &CurveSeries) -> Result<(CurveSeries, CurveSeries)> {
    let n = series.len();
    if n < 2 {
        return Err(Error::invalid(format!(
            "autoregression needs at least 2 curves, got {n}"
        )));
    }
    Ok((series.slice(0..n - 1)?, series.slice(1..n)?))
}

/// Candidate bandwidths are quantiles of the pairwise predictor distances.
#[derive(Clone, Debug, PartialEq)]
pub struct BandwidthSearch {
    quantiles: Vec<f64>,
    min_active_neighbors: usize,
}

impl BandwidthSearch {
    pub fn new(quantiles: Vec<f64>, min_active_neighbors: usize) -> Result<Self> {
        if quantiles.is_empty() {
            return Err(Error::invalid("bandwidth quantile grid is empty"));
        }
        if let Some(p) = quantiles.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
            return Err(Error::invalid(format!(
                "bandwidth quantile {p} is outside (0, 1]"
            )));
        }
        if quantiles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "bandwidth quantiles must be strictly increasing",
            ));
        }
        if min_active_neighbors == 0 {
            return Err(Error::invalid("min_active_neighbors must be at least 1"));
        }
        Ok(BandwidthSearch {
            quantiles,
            min_active_neighbors,
        })
    }

    pub fn quantiles(&self) -> &[f64] {
        &self.quantiles
    }

    pub fn min_active_neighbors(&self) -> usize {
        self.min_active_neighbors
    }
}

impl Default for BandwidthSearch {
    /// Probabilities 0.05, 0.10, ..., 0.50 and one active neighbour.
    fn default() -> Self {
        BandwidthSearch {
            quantiles: (1..=10).map(|k| k as f64 * 0.05).collect(),
            min_active_neighbors: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandwidthChoice {
    pub bandwidth: f64,
    /// Summed leave-one-out ISE at the chosen bandwidth; `None` when degenerate.
    pub cv_score: Option<f64>,
    /// All pairwise predictor distances were zero.
    pub degenerate: bool,
}

/// Leave-one-out cross-validated bandwidth over the search's quantile grid.
///
/// Needs at least two pairs. Ties in the CV score go to the smaller bandwidth.
pub fn select_bandwidth(
    predictors: &CurveSeries,
    responses: &CurveSeries,
    search: &BandwidthSearch,
    semimetric: SemiMetricSpec,
    kernel: KernelSpec,
) -> Result<BandwidthChoice> {
    if predictors.len() != responses.len() {
        return Err(Error::invalid(format!(
            "predictors ({}) and responses ({}) differ in length",
            predictors.len(),
            responses.len()
        )));
    }
    if predictors.len() < 2 {
        return Err(Error::invalid(format!(
            "bandwidth selection needs at least 2 pairs, got {}",
            predictors.len()
        )));
    }
    let transformed = TransformedCurves::from_series(predictors, semimetric);
    let dm = transformed.distance_matrix();
    let rows: Vec<&[f64]> = responses.rows().collect();
    let quad = trapezoid_weights(responses.grid());
    Ok(loocv_select(&dm, 0, &rows, &quad, search, kernel))
}

pub(crate) struct KernelWeights {
    pub weights: Vec<f64>,
    /// Bandwidth actually used (differs from the requested one after fallback).
    #[allow(dead_code)]
    pub bandwidth: f64,
}

/// Normalised kernel weights for distances `dists`, with the nearest-neighbour
/// fallback when all raw weights vanish.
pub(crate) fn kernel_weights(dists: &[f64], bandwidth: f64, kernel: KernelSpec) -> KernelWeights {
    let raw = |h: f64| -> Vec<f64> { dists.iter().map(|d| kernel.eval(d / h)).collect() };
    let mut h = bandwidth;
    let mut w = raw(h);
    let mut total: f64 = w.iter().sum();
    if total <= 0.0 {
        let nearest = dists.iter().copied().fold(f64::INFINITY, f64::min);
        h = FALLBACK_INFLATION * nearest;
        w = raw(h);
        total = w.iter().sum();
    }
    for v in &mut w {
        *v /= total;
    }
    KernelWeights {
        weights: w,
        bandwidth: h,
    }
}

pub(crate) fn weighted_average(weights: &[f64], rows: &[&[f64]]) -> Vec<f64> {
    let m = rows[0].len();
    let mut out = vec![0.0; m];
    for (w, r) in weights.iter().zip(rows) {
        if *w == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(r.iter()) {
            *o += w * v;
        }
    }
    out
}

/// Candidate bandwidths: order statistics `d_(ceil(p·M))` of the `M` pairwise
/// distances among the first `len` rows, keeping positive values only. If
/// every quantile is zero but some distance is positive, the smallest positive
/// distance is the single candidate. `None` when every distance is zero.
pub(crate) fn candidate_bandwidths(
    dm: &DistanceMatrix,
    offset: usize,
    len: usize,
    quantiles: &[f64],
) -> Option<Vec<f64>> {
    let mut d: Vec<f64> = Vec::with_capacity(len * (len - 1) / 2);
    for i in 0..len {
        for j in i + 1..len {
            d.push(dm.get(offset + i, offset + j));
        }
    }
    d.sort_unstable_by(f64::total_cmp);
    let m = d.len();
    if m == 0 || d[m - 1] <= 0.0 {
        return None;
    }
    let mut out: Vec<f64> = Vec::with_capacity(quantiles.len());
    for &p in quantiles {
        let rank = ((p * m as f64).ceil() as usize).clamp(1, m);
        let v = d[rank - 1];
        if v > 0.0 && out.last().is_none_or(|&last| v > last) {
            out.push(v);
        }
    }
    if out.is_empty() {
        let smallest = d.iter().copied().find(|v| *v > 0.0)?;
        out.push(smallest);
    }
    Some(out)
}

/// LOOCV over pairs `(dm row offset+i, responses[i])`, `i in 0..responses.len()`.
pub(crate) fn loocv_select(
    dm: &DistanceMatrix,
    offset: usize,
    responses: &[&[f64]],
    quad: &[f64],
    search: &BandwidthSearch,
    kernel: KernelSpec,
) -> BandwidthChoice {
    let len = responses.len();
    let Some(candidates) = candidate_bandwidths(dm, offset, len, search.quantiles()) else {
        return BandwidthChoice {
            bandwidth: DEGENERATE_BANDWIDTH,
            cv_score: None,
            degenerate: true,
        };
    };
    let per_point: Vec<Vec<f64>> = (0..len)
        .into_par_iter()
        .map(|t| {
            loo_scores_for_point(
                dm,
                offset,
                t,
                responses,
                quad,
                &candidates,
                search.min_active_neighbors(),
                kernel,
            )
        })
        .collect();
    let mut totals = vec![0.0; candidates.len()];
    for scores in &per_point {
        for (tot, s) in totals.iter_mut().zip(scores) {
            *tot += s;
        }
    }
    // Scores that agree up to rounding count as ties, which go to the smaller
    // bandwidth; exact ties are common when only the nearest neighbour is active.
    let min = totals.iter().copied().fold(f64::INFINITY, f64::min);
    let best = totals
        .iter()
        .position(|s| *s <= min + TIE_RELATIVE_TOLERANCE * min.abs())
        .unwrap_or(0);
    BandwidthChoice {
        bandwidth: candidates[best],
        cv_score: Some(totals[best]),
        degenerate: false,
    }
}

/// Squared prediction error of point `t` left out, for every candidate.
///
/// For the quadratic kernel the weighted sum over the active neighbours is
/// `1.5 (Σ Y_s - h⁻² Σ d_s² Y_s)`, so sorting neighbours by distance turns
/// every candidate into a prefix of two running sums.
#[allow(clippy::too_many_arguments)]
fn loo_scores_for_point(
    dm: &DistanceMatrix,
    offset: usize,
    t: usize,
    responses: &[&[f64]],
    quad: &[f64],
    candidates: &[f64],
    min_active: usize,
    kernel: KernelSpec,
) -> Vec<f64> {
    let len = responses.len();
    let row = &dm.row(offset + t, offset + len)[offset..];
    let mut neigh: Vec<(f64, usize)> = row
        .iter()
        .enumerate()
        .filter(|(s, _)| *s != t)
        .map(|(s, d)| (*d, s))
        .collect();
    neigh.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let k = min_active.min(neigh.len());
    let kth = neigh[k - 1].0;
    // Effective bandwidth per candidate: inflate when fewer than k neighbours
    // fall strictly inside the kernel support.
    let mut effective: Vec<(f64, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(ci, &h)| {
            let active = neigh.partition_point(|(d, _)| *d < h);
            if active >= k {
                (h, ci)
            } else {
                (FALLBACK_INFLATION * kth, ci)
            }
        })
        .collect();
    effective.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // The running-sum form below is specific to the quadratic kernel.
    let crate::fda::KernelKind::Quadratic = kernel.kind;
    let m = responses[t].len();
    let mut sum_y = vec![0.0; m];
    let mut sum_d2y = vec![0.0; m];
    let mut count = 0.0;
    let mut sum_d2 = 0.0;
    let mut next = 0;
    let mut scores = vec![0.0; candidates.len()];
    let mut pred = vec![0.0; m];
    for &(h, ci) in &effective {
        while next < neigh.len() && neigh[next].0 < h {
            let (d, s) = neigh[next];
            let d2 = d * d;
            for ((a, b), y) in sum_y.iter_mut().zip(sum_d2y.iter_mut()).zip(responses[s]) {
                *a += y;
                *b += d2 * y;
            }
            count += 1.0;
            sum_d2 += d2;
            next += 1;
        }
        let inv_h2 = 1.0 / (h * h);
        let denom = count - sum_d2 * inv_h2;
        for ((p, a), b) in pred.iter_mut().zip(&sum_y).zip(&sum_d2y) {
            *p = (a - b * inv_h2) / denom;
        }
        scores[ci] = weighted_sq_dist(&pred, responses[t], quad);
    }
    scores
}
