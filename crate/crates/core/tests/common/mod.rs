//! Helpers shared by the integration suites.
#![allow(dead_code)]

use betaedge::{Ensemble, FiniteDensity, Rational};
use rug::Float;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rho(d: &FiniteDensity, x: f64) -> f64 {
    d.eval(&Float::with_val(d.prec(), x)).unwrap().to_f64()
}

fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (hi - lo) / n as f64;
    let inner: f64 = (1..n).map(|k| f(lo + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(lo) + f(hi) + inner) * h / 3.0
}

/// Walk outward from `start` in steps of `step` until `f` has dropped below
/// `1e-30` of the largest value seen.
fn truncation_point(f: &impl Fn(f64) -> f64, start: f64, step: f64) -> f64 {
    let mut peak: f64 = 0.0;
    let mut x = start;
    loop {
        let v = f(x);
        peak = peak.max(v);
        if peak > 0.0 && v < 1e-30 * peak {
            return x;
        }
        x += step;
    }
}

/// `Int rho_N` by composite Simpson over the window where the density
/// exceeds `1e-30` of its peak. The half-line is mapped by `x = u^2`,
/// which removes the `sqrt`-type singularity of the weight at the origin.
pub fn mass(d: &FiniteDensity) -> f64 {
    const PANELS: usize = 4000;
    if d.ensemble().family.is_laguerre() {
        let f = |u: f64| 2.0 * u * rho(d, u * u);
        let hi = truncation_point(&f, 0.0, 0.25);
        simpson(f, 0.0, hi, PANELS)
    } else {
        let f = |x: f64| rho(d, x);
        let hi = truncation_point(&f, 0.0, 0.25);
        simpson(f, -hi, hi, PANELS)
    }
}

pub fn gaussian(beta: u32) -> Ensemble {
    Ensemble::gaussian(beta).unwrap()
}

pub fn laguerre(beta: u32, a: Rational) -> Ensemble {
    Ensemble::laguerre_fixed(beta, a).unwrap()
}

pub fn proportional(beta: u32, alpha: Rational) -> Ensemble {
    Ensemble::laguerre_proportional(beta, alpha).unwrap()
}

/// `n` evenly spaced points in `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}
