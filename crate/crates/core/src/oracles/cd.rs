//! Finite-N density at beta = 2 as a Christoffel–Darboux sum
//! `rho_N(x) = w(x) sum_{k<N} p_k(x)^2` over orthonormal polynomials.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::ensemble::Family;
use crate::error::{Error, Result};
use crate::mp::{to_decimal, to_rug_rational};

/// Minimum working precision for the three-term recurrences.
pub const CD_MIN_PREC: u32 = 256;

/// Jacobi-matrix entries: `x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}`.
trait JacobiMatrix {
    fn diag(&self, k: u64, w: u32) -> Float;
    fn offdiag(&self, k: u64, w: u32) -> Float;
    fn p0(&self, w: u32) -> Float;
}

/// Hermite, weight `exp(-x^2)`: `a_k = 0`, `b_k = sqrt(k/2)`.
struct Hermite;

impl JacobiMatrix for Hermite {
    fn diag(&self, _k: u64, w: u32) -> Float {
        Float::with_val(w, 0)
    }
    fn offdiag(&self, k: u64, w: u32) -> Float {
        (Float::with_val(w, k) / 2u32).sqrt()
    }
    fn p0(&self, w: u32) -> Float {
        Float::with_val(w, Constant::Pi).pow(Float::with_val(w, -0.25))
    }
}

/// Laguerre, weight `x^a exp(-x)`: `a_k = 2k + a + 1`, `b_k = sqrt(k (k + a))`.
struct Laguerre {
    a: Float,
}

impl JacobiMatrix for Laguerre {
    fn diag(&self, k: u64, w: u32) -> Float {
        Float::with_val(w, &self.a + (2 * k + 1))
    }
    fn offdiag(&self, k: u64, w: u32) -> Float {
        (Float::with_val(w, &self.a + k) * k).sqrt()
    }
    fn p0(&self, w: u32) -> Float {
        let g = Float::with_val(w, &self.a + 1u32).gamma();
        g.sqrt().recip()
    }
}

fn sum_of_squares<J: JacobiMatrix>(jm: &J, n: usize, x: &Float, w: u32) -> Float {
    let mut prev = Float::with_val(w, 0);
    let mut curr = jm.p0(w);
    let mut sum = Float::with_val(w, curr.square_ref());
    for k in 0..n.saturating_sub(1) as u64 {
        let t = Float::with_val(w, x - jm.diag(k, w)) * &curr - jm.offdiag(k, w) * &prev;
        let next = t / jm.offdiag(k + 1, w);
        sum += Float::with_val(w, next.square_ref());
        prev = std::mem::replace(&mut curr, next);
    }
    sum
}

/// `rho_N(x)` for `N` eigenvalues at beta = 2, with weight `exp(-x^2)`
/// (Gaussian) or `x^a exp(-x)` (Laguerre; `a = alpha N` when proportional).
pub fn cd_density(family: &Family, n: usize, beta: u32, x: &Float, prec: u32) -> Result<Float> {
    if beta != 2 {
        return Err(Error::BetaUnsupported(beta));
    }
    let w = prec.max(CD_MIN_PREC) + 64;
    let xw = Float::with_val(w, x);
    if n == 0 {
        return Ok(Float::with_val(prec, 0));
    }
    let v = match family {
        Family::Gaussian => {
            let s = sum_of_squares(&Hermite, n, &xw, w);
            s * Float::with_val(w, -Float::with_val(w, xw.square_ref())).exp()
        }
        _ => {
            let a = Float::with_val(w, &to_rug_rational(&family.laguerre_a(n).expect("Laguerre")));
            if xw.is_sign_negative() && !xw.is_zero() {
                return Err(Error::OutOfSupport(to_decimal(x, 20)));
            }
            let s = sum_of_squares(&Laguerre { a: a.clone() }, n, &xw, w);
            let weight = if xw.is_zero() {
                if a.is_zero() {
                    Float::with_val(w, 1)
                } else if a.is_sign_positive() {
                    Float::with_val(w, 0)
                } else {
                    return Err(Error::OutOfSupport("0".into()));
                }
            } else {
                (Float::with_val(w, xw.ln_ref()) * &a - &xw).exp()
            };
            s * weight
        }
    };
    Ok(Float::with_val(prec, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    const P: u32 = 256;

    #[test]
    fn small_cases() {
        let x0 = Float::with_val(P, 0);
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        let g1 = cd_density(&Family::Gaussian, 1, 2, &Float::with_val(P, 0.3), P).unwrap();
        assert!((g1.to_f64() - inv_sqrt_pi * (-0.09f64).exp()).abs() < 1e-16);
        let g2 = cd_density(&Family::Gaussian, 2, 2, &x0, P).unwrap();
        assert!((g2.to_f64() - inv_sqrt_pi).abs() < 1e-16);
        let lag = Family::LaguerreFixed { a: BigRational::from_integer(0.into()) };
        assert!((cd_density(&lag, 2, 2, &x0, P).unwrap().to_f64() - 2.0).abs() < 1e-16);
        assert_eq!(cd_density(&Family::Gaussian, 3, 4, &x0, P), Err(Error::BetaUnsupported(4)));
    }
}
