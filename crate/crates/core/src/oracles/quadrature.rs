//! Brute-force multiple integrals for tiny particle numbers.
//!
//! Every integrand here is a polynomial times a product of one-dimensional
//! weights, so tensor products of Gauss rules for that weight are exact once
//! they have enough nodes. The node count is raised until two consecutive
//! rules agree; the rules themselves come from the eigen-decomposition of
//! the weight's Jacobi matrix.

use num_traits::ToPrimitive;

use crate::ensemble::{Ensemble, Family};
use crate::error::{Error, Result};
use crate::tridiag::eigen_first_components;

/// Largest particle count the oracle will integrate over.
pub const MAX_PARTICLES: usize = 3;

const MIN_NODES: usize = 8;
const MAX_NODES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Real,
    HalfLine,
}

/// A one-dimensional weight `w(t)` over its domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weight {
    pub domain: Domain,
    /// Gaussian: `exp(-c t^2)`; half line: `t^e exp(-c t)`.
    pub rate: f64,
    pub power: f64,
}

impl Weight {
    pub fn gaussian(rate: f64) -> Self {
        Weight { domain: Domain::Real, rate, power: 0.0 }
    }

    pub fn laguerre(power: f64, rate: f64) -> Self {
        Weight { domain: Domain::HalfLine, rate, power }
    }

    /// Weight of the beta-ensemble of an `n`-eigenvalue matrix.
    pub fn for_ensemble(ensemble: &Ensemble, matrix_size: usize) -> Self {
        let beta = ensemble.beta as f64;
        match &ensemble.family {
            Family::Gaussian => Weight::gaussian(beta / 2.0),
            fam => {
                let a = fam.laguerre_a(matrix_size).expect("Laguerre").to_f64().expect("finite a");
                Weight::laguerre(beta * a / 2.0, beta / 2.0)
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.domain {
            Domain::Real => (-self.rate * t * t).exp(),
            Domain::HalfLine => {
                if t <= 0.0 {
                    return if self.power == 0.0 && t == 0.0 { 1.0 } else { 0.0 };
                }
                (self.power * t.ln() - self.rate * t).exp()
            }
        }
    }

    /// `m`-point Gauss rule for this weight, exact for polynomials of
    /// degree `2m - 1`.
    pub fn gauss_rule(&self, m: usize) -> Result<Vec<(f64, f64)>> {
        // Rule for exp(-s^2) or s^e exp(-s), then rescale.
        let (diag, off, mu0, stretch): (Vec<f64>, Vec<f64>, f64, f64) = match self.domain {
            Domain::Real => (
                vec![0.0; m],
                (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect(),
                std::f64::consts::PI.sqrt(),
                1.0 / self.rate.sqrt(),
            ),
            Domain::HalfLine => {
                let e = self.power;
                (
                    (0..m).map(|k| 2.0 * k as f64 + e + 1.0).collect(),
                    (1..m).map(|k| (k as f64 * (k as f64 + e)).sqrt()).collect(),
                    statrs::function::gamma::gamma(e + 1.0) * self.rate.powf(-e),
                    1.0 / self.rate,
                )
            }
        };
        let pairs = eigen_first_components(&diag, &off)?;
        Ok(pairs.into_iter().map(|(s, z)| (s * stretch, mu0 * stretch * z * z)).collect())
    }
}

/// Product-rule integral of `f` over `dims` copies of the weight.
fn product_rule(rule: &[(f64, f64)], dims: usize, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    if dims == 0 {
        return f(&[]);
    }
    let m = rule.len();
    let mut idx = vec![0usize; dims];
    let mut t = vec![0.0; dims];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for (d, &i) in idx.iter().enumerate() {
            t[d] = rule[i].0;
            w *= rule[i].1;
        }
        total += w * f(&t);
        // odometer
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == dims {
                return total;
            }
        }
    }
}

/// `Int w(t_1)...w(t_d) f(t) dt`, adding nodes until two consecutive rules
/// agree to relative tolerance `tol`.
pub fn integrate(weight: &Weight, dims: usize, f: &dyn Fn(&[f64]) -> f64, tol: f64) -> Result<f64> {
    let mut m = MIN_NODES;
    let mut last = product_rule(&weight.gauss_rule(m)?, dims, f);
    while m < MAX_NODES {
        m += 4;
        let next = product_rule(&weight.gauss_rule(m)?, dims, f);
        if (next - last).abs() <= tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        last = next;
    }
    Err(Error::QuadratureNoConvergence(MAX_NODES))
}

fn vandermonde_power(t: &[f64], power: u32) -> f64 {
    let mut v = 1.0;
    for j in 0..t.len() {
        for k in j + 1..t.len() {
            v *= (t[k] - t[j]).abs().powi(power as i32);
        }
    }
    v
}

fn elementary(vals: &[f64], p: usize) -> f64 {
    let mut e = vec![0.0; p + 1];
    e[0] = 1.0;
    for (count, &v) in vals.iter().enumerate() {
        for k in (1..=p.min(count + 1)).rev() {
            e[k] += e[k - 1] * v;
        }
    }
    e[p]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The auxiliary integral
/// `p!(n-p)!/n! Int prod w(t_l) (x - t_l)^(alpha-1) |Delta|^(2 lambda) e_p(x - t) dt`
/// for integer `alpha >= 1`, by brute force.
pub fn auxiliary_integral(weight: &Weight, n: usize, lambda: u32, alpha: u32, p: usize, x: f64, tol: f64) -> Result<f64> {
    if n > MAX_PARTICLES + 1 {
        return Err(Error::TooLarge(n));
    }
    if p > n {
        return Err(Error::IndexOutOfRange { index: p, len: n });
    }
    let f = |t: &[f64]| {
        let diffs: Vec<f64> = t.iter().map(|&tl| x - tl).collect();
        let base: f64 = diffs.iter().map(|d| d.powi(alpha as i32 - 1)).product();
        base * vandermonde_power(t, 2 * lambda) * elementary(&diffs, p)
    };
    Ok(integrate(weight, n, &f, tol)? / binomial(n, p))
}

/// `Z_n = Int prod w(t_l) |Delta|^beta dt` by brute force.
pub fn partition_function(weight: &Weight, n: usize, beta: u32, tol: f64) -> Result<f64> {
    auxiliary_integral(weight, n, beta / 2, 1, 0, 0.0, tol)
}

/// `< prod_l (x - t_l)^beta >` over `n` particles, by brute force.
pub fn average_oracle(ensemble: &Ensemble, matrix_size: usize, n: usize, x: f64, tol: f64) -> Result<f64> {
    if n > MAX_PARTICLES {
        return Err(Error::TooLarge(n));
    }
    let w = Weight::for_ensemble(ensemble, matrix_size);
    let beta = ensemble.beta;
    let num = auxiliary_integral(&w, n, beta / 2, beta + 1, 0, x, tol)?;
    let den = partition_function(&w, n, beta, tol)?;
    Ok(num / den)
}

/// `rho_N(x) = w(x) N / Z_N Int_{R^(N-1)} prod w(t_l) |x - t_l|^beta |Delta|^beta dt`
/// with every integral done by quadrature. Needs `N - 1 <= 3`.
pub fn quadrature_oracle(ensemble: &Ensemble, matrix_size: usize, x: f64, tol: f64) -> Result<f64> {
    let n = matrix_size;
    if n == 0 {
        return Err(Error::Inadmissible("matrix size must be >= 1".into()));
    }
    if n - 1 > MAX_PARTICLES {
        return Err(Error::TooLarge(n - 1));
    }
    let w = Weight::for_ensemble(ensemble, n);
    let beta = ensemble.beta;
    let inner = auxiliary_integral(&w, n - 1, beta / 2, beta + 1, 0, x, tol)?;
    let z = partition_function(&w, n, beta, tol)?;
    Ok(w.eval(x) * n as f64 * inner / z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn one_dimensional_moments() {
        let g = Weight::gaussian(1.0);
        let z = integrate(&g, 1, &|_| 1.0, 1e-14).unwrap();
        assert!((z - PI.sqrt()).abs() < 1e-13);
        let m2 = integrate(&g, 1, &|t| t[0] * t[0], 1e-14).unwrap();
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-13);
        let l = Weight::laguerre(0.5, 2.0);
        let z = integrate(&l, 1, &|_| 1.0, 1e-14).unwrap();
        assert!((z - PI.sqrt() / 2.0 / 2f64.powf(1.5)).abs() < 1e-13);
        let m1 = integrate(&l, 1, &|t| t[0], 1e-14).unwrap();
        assert!((m1 - 0.75 * z).abs() < 1e-13);
    }

    #[test]
    fn gaussian_two_particle_partition() {
        let z = partition_function(&Weight::gaussian(1.0), 2, 2, 1e-13).unwrap();
        assert!((z - PI).abs() < 1e-11);
    }

    #[test]
    fn single_particle_density_is_the_weight() {
        let ens = Ensemble::gaussian(2).unwrap();
        let v = quadrature_oracle(&ens, 1, 0.4, 1e-13).unwrap();
        assert!((v - (-0.16f64).exp() / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn too_many_particles() {
        let ens = Ensemble::gaussian(2).unwrap();
        assert_eq!(quadrature_oracle(&ens, 5, 0.0, 1e-10), Err(Error::TooLarge(4)));
    }
}
