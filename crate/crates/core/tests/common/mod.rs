//! Straight-line reference implementations used as test oracles.
//!
//! Nothing here calls into `fgc_core`; everything works on plain slices and
//! assumes uniform grids, where the textbook stencils apply.

#![allow(dead_code)]

pub fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Composite Simpson rule with `intervals` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    assert!(intervals.is_multiple_of(2));
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        let x = a + h * i as f64;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

pub fn trapezoid(values: &[f64], points: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..points.len() {
        s += (points[i] - points[i - 1]) * (values[i] + values[i - 1]) / 2.0;
    }
    s
}

/// Second derivative on a uniform grid: `(f[i-1] - 2f[i] + f[i+1]) / h²`
/// inside, `(2f0 - 5f1 + 4f2 - f3) / h²` (mirrored) at the ends.
pub fn second_derivative_uniform(f: &[f64], points: &[f64]) -> Vec<f64> {
    let m = f.len();
    let h = points[1] - points[0];
    let h2 = h * h;
    let mut out = vec![0.0; m];
    for i in 1..m - 1 {
        out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
    }
    if m >= 4 {
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
        out[m - 1] = (2.0 * f[m - 1] - 5.0 * f[m - 2] + 4.0 * f[m - 3] - f[m - 4]) / h2;
    } else {
        out[0] = out[1];
        out[m - 1] = out[1];
    }
    out
}

/// Semi-metric of order 0 or 2 on a uniform grid.
pub fn distance(a: &[f64], b: &[f64], points: &[f64], order: u8) -> f64 {
    let (da, db) = match order {
        0 => (a.to_vec(), b.to_vec()),
        2 => (
            second_derivative_uniform(a, points),
            second_derivative_uniform(b, points),
        ),
        _ => panic!("oracle supports orders 0 and 2"),
    };
    let sq: Vec<f64> = da.iter().zip(&db).map(|(x, y)| (x - y) * (x - y)).collect();
    trapezoid(&sq, points).sqrt()
}

pub fn quadratic_kernel(t: f64) -> f64 {
    if (0.0..=1.0).contains(&t) {
        1.5 * (1.0 - t * t)
    } else {
        0.0
    }
}

/// Nadaraya-Watson average of `responses` with kernel weights on `dists`,
/// inflating `h` to 1.001 × the nearest distance when every weight is zero.
pub fn nw_from_distances(dists: &[f64], responses: &[Vec<f64>], h: f64) -> Vec<f64> {
    let mut k: Vec<f64> = dists.iter().map(|d| quadratic_kernel(d / h)).collect();
    if k.iter().sum::<f64>() == 0.0 {
        let nearest = dists.iter().cloned().fold(f64::INFINITY, f64::min);
        k = dists
            .iter()
            .map(|d| quadratic_kernel(d / (1.001 * nearest)))
            .collect();
    }
    let total: f64 = k.iter().sum();
    let m = responses[0].len();
    let mut out = vec![0.0; m];
    for (w, r) in k.iter().zip(responses) {
        for j in 0..m {
            out[j] += w / total * r[j];
        }
    }
    out
}

/// Cross-regression prediction at `x` from pairs `(predictors[t], responses[t])`.
pub fn nw_predict(
    predictors: &[Vec<f64>],
    responses: &[Vec<f64>],
    x: &[f64],
    h: f64,
    points: &[f64],
    order: u8,
) -> Vec<f64> {
    let d: Vec<f64> = predictors
        .iter()
        .map(|p| distance(p, x, points, order))
        .collect();
    nw_from_distances(&d, responses, h)
}

/// Lag-1 autoregression prediction at `x`.
pub fn nw_autopredict(
    series: &[Vec<f64>],
    x: &[f64],
    h: f64,
    points: &[f64],
    order: u8,
) -> Vec<f64> {
    let n = series.len();
    nw_predict(&series[..n - 1], &series[1..], x, h, points, order)
}

pub fn ise(a: &[f64], b: &[f64], points: &[f64]) -> f64 {
    let sq: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).collect();
    trapezoid(&sq, points)
}

/// Candidate bandwidths: positive distinct order statistics `d_(ceil(p·M))`,
/// or the smallest positive distance when all of those are zero.
pub fn candidate_bandwidths(
    predictors: &[Vec<f64>],
    points: &[f64],
    order: u8,
    quantiles: &[f64],
) -> Vec<f64> {
    let n = predictors.len();
    let mut d = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            d.push(distance(&predictors[i], &predictors[j], points, order));
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = d.len();
    let mut out: Vec<f64> = Vec::new();
    for &p in quantiles {
        let rank = ((p * m as f64).ceil() as usize).clamp(1, m);
        let v = d[rank - 1];
        if v > 0.0 && out.iter().all(|c| v > *c) {
            out.push(v);
        }
    }
    if out.is_empty() {
        if let Some(v) = d.iter().find(|v| **v > 0.0) {
            out.push(*v);
        }
    }
    out
}

/// Exhaustive leave-one-out CV; returns `(bandwidth, score)` with ties going
/// to the smaller bandwidth, or `(1.0, NaN)` when all distances vanish.
pub fn loocv_bandwidth(
    predictors: &[Vec<f64>],
    responses: &[Vec<f64>],
    points: &[f64],
    order: u8,
    quantiles: &[f64],
) -> (f64, f64) {
    let cands = candidate_bandwidths(predictors, points, order, quantiles);
    if cands.is_empty() {
        return (1.0, f64::NAN);
    }
    let n = predictors.len();
    let mut scores = Vec::new();
    for &h in &cands {
        let mut score = 0.0;
        for t in 0..n {
            let p: Vec<Vec<f64>> = (0..n)
                .filter(|&s| s != t)
                .map(|s| predictors[s].clone())
                .collect();
            let r: Vec<Vec<f64>> = (0..n)
                .filter(|&s| s != t)
                .map(|s| responses[s].clone())
                .collect();
            let pred = nw_predict(&p, &r, &predictors[t], h, points, order);
            score += ise(&pred, &responses[t], points);
        }
        scores.push((h, score));
    }
    // Near-equal scores (relative 1e-10) are ties and go to the smaller bandwidth.
    let min = scores.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    *scores.iter().find(|s| s.1 <= min + 1e-10 * min).unwrap()
}

pub fn default_quantiles() -> Vec<f64> {
    (1..=10).map(|k| k as f64 * 0.05).collect()
}

/// Independent re-implementation of one expanding-window step at zero-based
/// target `t`: returns `(auto_y, cross_y, auto_x, cross_x)` forecasts.
pub fn forecast_step(
    x: &[Vec<f64>],
    y: &[Vec<f64>],
    t: usize,
    points: &[f64],
    order: u8,
) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let q = default_quantiles();
    let xw = &x[..t];
    let yw = &y[..t];
    let auto_bw = |s: &[Vec<f64>]| {
        if s.len() < 3 {
            1.0
        } else {
            loocv_bandwidth(&s[..s.len() - 1], &s[1..], points, order, &q).0
        }
    };
    let bx = auto_bw(xw);
    let by = auto_bw(yw);
    let x_hat = nw_autopredict(xw, &x[t - 1], bx, points, order);
    let y_hat = nw_autopredict(yw, &y[t - 1], by, points, order);
    let hy = loocv_bandwidth(xw, yw, points, order, &q).0;
    let hx = loocv_bandwidth(yw, xw, points, order, &q).0;
    let cross_y = nw_predict(xw, yw, &x_hat, hy, points, order);
    let cross_x = nw_predict(yw, xw, &y_hat, hx, points, order);
    (y_hat, cross_y, x_hat, cross_x)
}

/// Tiny deterministic generator (xorshift64*) so fixtures don't depend on `rand`.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 >> 12;
        self.0 ^= self.0 << 25;
        self.0 ^= self.0 >> 27;
        let v = self.0.wrapping_mul(0x2545_F491_4F6C_DD1D);
        (v >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform on `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Random smooth-ish curve: a random cubic plus a random sine.
pub fn random_curve(rng: &mut XorShift, points: &[f64]) -> Vec<f64> {
    let c: Vec<f64> = (0..6).map(|_| rng.range(-2.0, 2.0)).collect();
    points
        .iter()
        .map(|u| c[0] + c[1] * u + c[2] * u * u + c[3] * u * u * u + c[4] * (3.0 * u + c[5]).sin())
        .collect()
}
