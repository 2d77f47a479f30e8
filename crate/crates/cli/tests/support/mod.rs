//! Fixtures and process helpers shared by the CLI test targets.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use fgc_core::ingest::write_curves;
use fgc_core::{CurveSeries, Grid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn fgc<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_fgc"))
        .args(args)
        .env_remove("FGC_THREADS")
        .output()
        .expect("spawn fgc")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn write(path: &Path, grid: &Grid, rows: Vec<Vec<f64>>) {
    let s = CurveSeries::from_rows(grid.clone(), rows, "s").unwrap();
    write_curves(&s, path, b',').unwrap();
}

/// `key = value` header of a report.
pub fn report_keys(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .take_while(|l| *l != "[steps]")
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

pub fn read_report(path: &Path) -> BTreeMap<String, String> {
    report_keys(&std::fs::read_to_string(path).unwrap())
}

/// Scalar AR(1) `a_t` with coefficient `rho` spread over `sin(πu)`;
/// `Y_t = X_{t-1}`.
pub fn shifted_ar_pair(
    seed: u64,
    rho: f64,
    n: usize,
    p: usize,
) -> (Grid, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let g = Grid::uniform(0.0, 1.0, p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = 0.0f64;
    let mut path = Vec::with_capacity(n + 51);
    for _ in 0..n + 51 {
        let z: f64 = rng.sample(StandardNormal);
        a = rho * a + z;
        path.push(a);
    }
    let path = &path[50..];
    let shape = |c: f64| -> Vec<f64> { g.points().iter().map(|u| c * (PI * u).sin()).collect() };
    let x = (1..=n).map(|t| shape(path[t])).collect();
    let y = (1..=n).map(|t| shape(path[t - 1])).collect();
    (g, x, y)
}

/// Noiseless pair: `X_t` rotates in the span of `sin(πu)` and `sin(2πu)` by a
/// golden-ratio angle each step, and `Y_t = cos(2θ_{t-1}) sin(πu)` is a fixed
/// functional of `X_{t-1}`.
pub fn rotation_pair(n: usize, p: usize) -> (Grid, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let g = Grid::uniform(0.0, 1.0, p).unwrap();
    let step = 2.0 * PI * 0.381966;
    let theta = |t: usize| 0.3 + step * t as f64;
    let x = (1..=n)
        .map(|t| {
            g.points()
                .iter()
                .map(|u| theta(t).cos() * (PI * u).sin() + theta(t).sin() * (2.0 * PI * u).sin())
                .collect()
        })
        .collect();
    let y = (1..=n)
        .map(|t| {
            g.points()
                .iter()
                .map(|u| (2.0 * theta(t - 1)).cos() * (PI * u).sin())
                .collect()
        })
        .collect();
    (g, x, y)
}

/// Two independent scalar AR(1) series on `sin(πu)` and `u(1-u)`.
pub fn independent_pair(seed: u64, n: usize, p: usize) -> (Grid, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let g = Grid::uniform(0.0, 1.0, p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut a, mut b) = (0.0f64, 0.0f64);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for t in 0..n + 20 {
        let (za, zb): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        a = 0.7 * a + za;
        b = 0.7 * b + zb;
        if t >= 20 {
            x.push(g.points().iter().map(|u| a * (PI * u).sin()).collect());
            y.push(g.points().iter().map(|u| b * u * (1.0 - u)).collect());
        }
    }
    (g, x, y)
}
