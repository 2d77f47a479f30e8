//! Bivariate functional process in which X Granger-causes Y, and the Monte
//! Carlo experiment counting correct predictability and causality calls.
//!
//! ```text
//! X_t(v) = ∫ ψ(v,s) X_{t-1}(s) ds + B_t(v),      ψ(v,s) = c·exp((v² + s²)/2)
//! Y_t(u) = a·Y_{t-1}(u) + ∫ X_t(v) √(uv) dv + σ·ε_t(u)
//! ```
//!
//! `B_t` and `ε_t` are independent standard Brownian paths on a uniform grid
//! over `[0, 1]`; integrals use the trapezoid rule on that grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fda::{trapezoid_weights, Curve, CurveSeries, Grid};
use crate::gcgmc::{run_expanding_window, AnalysisConfig, WindowPlan};

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Number of curves kept.
    pub n: usize,
    /// Grid points per curve.
    pub p: usize,
    /// Curves generated and discarded before the kept sample.
    pub burn_in: usize,
    /// Own-lag coefficient of Y.
    pub ar_coefficient: f64,
    /// Scale `c` of the FAR(1) kernel ψ.
    pub psi_scale: f64,
    /// Scale `σ` of the Brownian noise in Y.
    pub noise_scale: f64,
    /// Scale of the Brownian innovation `B_t` in X (1 for the standard process).
    pub driver_scale: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n: 250,
            p: 50,
            burn_in: 50,
            ar_coefficient: 0.6,
            psi_scale: 0.34,
            noise_scale: 0.1,
            driver_scale: 1.0,
            seed: 0,
        }
    }
}

/// Points of the refined quadrature grid for the Hilbert–Schmidt norm.
const HS_GRID_POINTS: usize = 200_001;

/// Hilbert–Schmidt norm of `ψ(v,s) = c·exp((v²+s²)/2)` on `[0,1]²`.
///
/// The kernel is separable, so the norm is `|c| · ∫₀¹ exp(v²) dv`.
pub fn psi_hilbert_schmidt_norm(psi_scale: f64) -> f64 {
    let g = Grid::uniform(0.0, 1.0, HS_GRID_POINTS).expect("valid grid");
    let w = trapezoid_weights(&g);
    let integral: f64 = g
        .points()
        .iter()
        .zip(&w)
        .map(|(v, w)| w * (v * v).exp())
        .sum();
    psi_scale.abs() * integral
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(Error::invalid(format!(
                "n must be at least 10, got {}",
                self.n
            )));
        }
        if self.p < Grid::MIN_POINTS {
            return Err(Error::invalid(format!(
                "p must be at least {}, got {}",
                Grid::MIN_POINTS,
                self.p
            )));
        }
        for (name, v) in [
            ("ar_coefficient", self.ar_coefficient),
            ("psi_scale", self.psi_scale),
            ("noise_scale", self.noise_scale),
            ("driver_scale", self.driver_scale),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
        }
        if self.ar_coefficient.abs() >= 1.0 {
            return Err(Error::invalid(format!(
                "ar_coefficient must satisfy |a| < 1, got {}",
                self.ar_coefficient
            )));
        }
        if self.noise_scale < 0.0 || self.driver_scale < 0.0 {
            return Err(Error::invalid(
                "noise_scale and driver_scale must be nonnegative",
            ));
        }
        let hs = psi_hilbert_schmidt_norm(self.psi_scale);
        if hs >= 1.0 {
            return Err(Error::invalid(format!(
                "psi_scale {} gives Hilbert-Schmidt norm {hs:.4} >= 1 (non-stationary)",
                self.psi_scale
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::uniform(0.0, 1.0, self.p)
    }
}

/// Standard Brownian motion on the uniform `p`-point grid over `[0, 1]`.
pub fn brownian_path<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<Curve> {
    let grid = Grid::uniform(0.0, 1.0, p)?;
    Ok(Curve::from_parts(
        grid.clone(),
        brownian_values(grid.points(), rng),
    ))
}

fn brownian_values<R: Rng + ?Sized>(u: &[f64], rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(u.len());
    out.push(0.0);
    let mut b = 0.0;
    for w in u.windows(2) {
        let z: f64 = rng.sample(StandardNormal);
        b += (w[1] - w[0]).sqrt() * z;
        out.push(b);
    }
    out
}

/// Integral operator `f ↦ ∫ k(·, s) f(s) ds` discretised with trapezoid weights.
struct IntegralOperator {
    /// Row-major `p × p`, quadrature weights folded in.
    matrix: Vec<f64>,
    p: usize,
}

impl IntegralOperator {
    fn new(grid: &Grid, kernel: impl Fn(f64, f64) -> f64) -> Self {
        let u = grid.points();
        let w = trapezoid_weights(grid);
        let p = u.len();
        let mut matrix = Vec::with_capacity(p * p);
        for &ui in u {
            for (j, &sj) in u.iter().enumerate() {
                matrix.push(kernel(ui, sj) * w[j]);
            }
        }
        IntegralOperator { matrix, p }
    }

    fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.matrix
            .chunks_exact(self.p)
            .map(|row| row.iter().zip(f).map(|(k, v)| k * v).sum())
            .collect()
    }
}

fn psi_operator(grid: &Grid, psi_scale: f64) -> IntegralOperator {
    IntegralOperator::new(grid, |v, s| psi_scale * (0.5 * (v * v + s * s)).exp())
}

fn beta_operator(grid: &Grid) -> IntegralOperator {
    IntegralOperator::new(grid, |u, v| (u * v).sqrt())
}

/// `u ↦ ∫ x(v) √(uv) dv` by trapezoid quadrature on `x`'s grid.
pub fn apply_beta(x: &Curve) -> Curve {
    let values = beta_operator(x.grid()).apply(x.values());
    Curve::from_parts(x.grid().clone(), values)
}

/// `v ↦ ∫ ψ(v,s) x(s) ds` by trapezoid quadrature on `x`'s grid.
pub fn apply_psi(x: &Curve, psi_scale: f64) -> Curve {
    let values = psi_operator(x.grid(), psi_scale).apply(x.values());
    Curve::from_parts(x.grid().clone(), values)
}

/// FAR(1) predictor series driven by Brownian innovations.
///
/// Starts from `X_0 = B_0`, generates `burn_in + n` further curves and keeps
/// the last `n`.
pub fn simulate_far1_x<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> Result<CurveSeries> {
    config.validate()?;
    let grid = config.grid()?;
    let psi = psi_operator(&grid, config.psi_scale);
    let u = grid.points();
    let mut x = scaled(brownian_values(u, rng), config.driver_scale);
    let mut kept = Vec::with_capacity(config.n);
    for t in 1..=config.burn_in + config.n {
        let drive = scaled(brownian_values(u, rng), config.driver_scale);
        x = add(psi.apply(&x), &drive);
        if t > config.burn_in {
            kept.push(Curve::from_parts(grid.clone(), x.clone()));
        }
    }
    CurveSeries::new(grid, kept, "X")
}

/// Simulated `(X, Y)` pair; deterministic in `config.seed`.
///
/// Draw order per time step: the X innovation, then the Y noise.
pub fn simulate_pair(config: &SimConfig) -> Result<(CurveSeries, CurveSeries)> {
    config.validate()?;
    let grid = config.grid()?;
    let psi = psi_operator(&grid, config.psi_scale);
    let beta = beta_operator(&grid);
    let u = grid.points();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut x = scaled(brownian_values(u, &mut rng), config.driver_scale);
    let mut y = scaled(brownian_values(u, &mut rng), config.noise_scale);
    let mut xs = Vec::with_capacity(config.n);
    let mut ys = Vec::with_capacity(config.n);
    for t in 1..=config.burn_in + config.n {
        let drive = scaled(brownian_values(u, &mut rng), config.driver_scale);
        let noise = scaled(brownian_values(u, &mut rng), config.noise_scale);
        x = add(psi.apply(&x), &drive);
        let regression = beta.apply(&x);
        y = y
            .iter()
            .zip(&regression)
            .zip(&noise)
            .map(|((prev, r), e)| config.ar_coefficient * prev + r + e)
            .collect();
        if t > config.burn_in {
            xs.push(Curve::from_parts(grid.clone(), x.clone()));
            ys.push(Curve::from_parts(grid.clone(), y.clone()));
        }
    }
    Ok((
        CurveSeries::new(grid.clone(), xs, "X")?,
        CurveSeries::new(grid, ys, "Y")?,
    ))
}

fn scaled(mut v: Vec<f64>, c: f64) -> Vec<f64> {
    if c != 1.0 {
        for x in &mut v {
            *x *= c;
        }
    }
    v
}

fn add(mut a: Vec<f64>, b: &[f64]) -> Vec<f64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Monte Carlo design over sample sizes and grid resolutions.
#[derive(Clone, Debug, PartialEq)]
pub struct McPlan {
    pub n_values: Vec<usize>,
    pub p_values: Vec<usize>,
    pub replications: usize,
    pub train_fraction: f64,
    pub master_seed: u64,
}

impl Default for McPlan {
    fn default() -> Self {
        McPlan {
            n_values: vec![250, 500, 1000],
            p_values: vec![50, 100, 200, 400],
            replications: 100,
            train_fraction: 0.8,
            master_seed: 0,
        }
    }
}

impl McPlan {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::invalid("replications must be at least 1"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::invalid(format!(
                "train_fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if self.n_values.is_empty() || self.p_values.is_empty() {
            return Err(Error::invalid("n_values and p_values must be non-empty"));
        }
        for &n in &self.n_values {
            WindowPlan::from_fraction(n, self.train_fraction)?;
        }
        Ok(())
    }
}

/// Counts for one `(n, p)` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McCell {
    pub n: usize,
    pub p: usize,
    /// Replications with `GcGMC(Y) > GcGMC(X)`.
    pub count_predictable: usize,
    /// Replications with `GcGMC(Y) > 0` and `GcGMC(X) < 0`.
    pub count_causal: usize,
    pub replications: usize,
    /// Replications where either GcGMC was undefined; counted in neither tally.
    pub undefined_count: usize,
}

impl McCell {
    pub fn predictable_proportion(&self) -> f64 {
        self.count_predictable as f64 / self.replications as f64
    }

    pub fn causal_proportion(&self) -> f64 {
        self.count_causal as f64 / self.replications as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McResult {
    /// Cells in `n_values × p_values` order, `p` varying fastest.
    pub cells: Vec<McCell>,
}

impl McResult {
    pub fn cell(&self, n: usize, p: usize) -> Option<&McCell> {
        self.cells.iter().find(|c| c.n == n && c.p == p)
    }

    pub const CSV_HEADER: &'static str =
        "n,p,count_predictable,count_causal,replications,undefined_count";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for c in &self.cells {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.n, c.p, c.count_predictable, c.count_causal, c.replications, c.undefined_count
            ));
        }
        s
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `rep` in cell `(n, p)`:
/// `splitmix64(master ⊕ splitmix64(n << 32 | p) ⊕ rep)`.
pub fn replication_seed(master_seed: u64, n: usize, p: usize, rep: usize) -> u64 {
    let cell_hash = splitmix64(((n as u64) << 32) | (p as u64 & 0xFFFF_FFFF));
    splitmix64(master_seed ^ cell_hash ^ rep as u64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReplicationOutcome {
    pub gcgmc_x: Option<f64>,
    pub gcgmc_y: Option<f64>,
}

/// One simulated pair analysed with the expanding window.
pub fn run_replication(
    template: &SimConfig,
    n: usize,
    p: usize,
    seed: u64,
    train_fraction: f64,
    analysis: &AnalysisConfig,
) -> Result<ReplicationOutcome> {
    let config = SimConfig {
        n,
        p,
        seed,
        ..template.clone()
    };
    let (x, y) = simulate_pair(&config)?;
    let plan = WindowPlan::from_fraction(n, train_fraction)?;
    let report = run_expanding_window(&x, &y, plan, analysis)?;
    Ok(ReplicationOutcome {
        gcgmc_x: report.gcgmc_x,
        gcgmc_y: report.gcgmc_y,
    })
}

/// Table of decision counts; replications run in parallel, results are
/// independent of scheduling.
pub fn run_monte_carlo(
    plan: &McPlan,
    template: &SimConfig,
    analysis: &AnalysisConfig,
) -> Result<McResult> {
    plan.validate()?;
    for &p in &plan.p_values {
        for &n in &plan.n_values {
            SimConfig {
                n,
                p,
                ..template.clone()
            }
            .validate()?;
        }
    }
    let mut cells = Vec::new();
    for &n in &plan.n_values {
        for &p in &plan.p_values {
            let outcomes = (0..plan.replications)
                .into_par_iter()
                .map(|rep| {
                    let seed = replication_seed(plan.master_seed, n, p, rep);
                    run_replication(template, n, p, seed, plan.train_fraction, analysis)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut cell = McCell {
                n,
                p,
                count_predictable: 0,
                count_causal: 0,
                replications: plan.replications,
                undefined_count: 0,
            };
            for o in outcomes {
                match (o.gcgmc_x, o.gcgmc_y) {
                    (Some(gx), Some(gy)) => {
                        cell.count_predictable += usize::from(gy > gx);
                        cell.count_causal += usize::from(gy > 0.0 && gx < 0.0);
                    }
                    _ => cell.undefined_count += 1,
                }
            }
            cells.push(cell);
        }
    }
    Ok(McResult { cells })
}
