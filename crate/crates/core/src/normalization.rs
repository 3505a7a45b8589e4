//! Partition functions in log space and the finite-N density
//!
//! ```text
//! rho_N(x) = w(x) * N * Z_{N-1} / Z_N * < prod_{l=1}^{N-1} (x - x_l)^beta >_{N-1}
//! ```
//!
//! with `Z` the gamma-product evaluations of the Gaussian
//! (`exp(-beta x^2/2)`) and Laguerre (`x^(beta a/2) exp(-beta x/2)`)
//! partition functions.

use num_rational::BigRational;
use rug::{Float, Rational};

use crate::ensemble::{Ensemble, Family};
use crate::error::{Error, Result};
use crate::mp::{eval_exact_poly, to_decimal, to_rug_rational};
use crate::poly::BigPoly;
use crate::recurrence::run_full_recurrence_with_progress;
use crate::scalar::Coefficient;
use crate::table::{DensityTable, TableMeta, VERSION};

/// Natural logarithm of a positive constant.
#[derive(Clone, Debug, PartialEq)]
pub struct LogConstant {
    pub log_value: Float,
}

impl LogConstant {
    pub fn zero(prec: u32) -> Self {
        LogConstant { log_value: Float::with_val(prec, 0) }
    }

    pub fn prec(&self) -> u32 {
        self.log_value.prec()
    }

    pub fn value(&self) -> Float {
        self.log_value.clone().exp()
    }

    pub fn to_f64(&self) -> f64 {
        self.log_value.to_f64()
    }
}

fn lgamma_q(q: &Rational, prec: u32) -> Result<Float> {
    if *q <= 0 {
        if q.denom() == &1 {
            return Err(Error::PoleHit(q.to_string()));
        }
        return Err(Error::Inadmissible(format!("gamma argument {q} is negative")));
    }
    Ok(Float::with_val(prec, q).ln_gamma())
}

fn rq(v: i64) -> Rational {
    Rational::from(v)
}

/// `log G_{beta,N}`, the Gaussian partition function for weight
/// `exp(-beta x^2 / 2)`:
///
/// `G = (2 pi)^(N/2) beta^(-N(1/2 + beta(N-1)/4)) prod_{j=2}^N Gamma(1 + j beta/2) / Gamma(1 + beta/2)`.
pub fn log_gaussian_z(beta: u32, n: usize, prec: u32) -> LogConstant {
    if n == 0 {
        return LogConstant::zero(prec);
    }
    let w = prec + 32;
    let b = rq(beta as i64);
    let nn = rq(n as i64);
    let two_pi = Float::with_val(w, rug::float::Constant::Pi) * 2u32;
    let mut acc = Float::with_val(w, two_pi.ln() * Float::with_val(w, &nn) / 2u32);
    // N (1/2 + beta (N - 1)/4)
    let expo = Rational::from(&nn * (Rational::from((1, 2)) + Rational::from(&b * (nn.clone() - 1u32)) / 4u32));
    acc -= Float::with_val(w, &expo) * Float::with_val(w, &b).ln();
    let half_beta = Rational::from((beta as i64, 2));
    let base = lgamma_q(&(Rational::from(1) + &half_beta), w).expect("positive argument");
    for j in 2..=n {
        let arg = Rational::from(1) + Rational::from(&half_beta * j as u32);
        acc += lgamma_q(&arg, w).expect("positive argument");
        acc -= &base;
    }
    LogConstant { log_value: Float::with_val(prec, acc) }
}

/// `log W_{a,beta,N}`, the Laguerre partition function for weight
/// `x^(beta a/2) exp(-beta x/2)`:
///
/// `W = (2/beta)^(N(a beta/2 + 1 + beta(N-1)/2)) prod_{j=1}^N Gamma(1 + j beta/2) Gamma(1 + (a+j-1) beta/2) / Gamma(1 + beta/2)`.
pub fn log_laguerre_z(a: &BigRational, beta: u32, n: usize, prec: u32) -> Result<LogConstant> {
    if *a <= BigRational::new((-2).into(), beta.into()) {
        return Err(Error::Inadmissible(format!("Laguerre exponent a = {a} <= -2/beta")));
    }
    if n == 0 {
        return Ok(LogConstant::zero(prec));
    }
    let w = prec + 32;
    let a = to_rug_rational(a);
    let b = rq(beta as i64);
    let nn = rq(n as i64);
    let half_beta = Rational::from((beta as i64, 2));
    let expo = Rational::from(
        &nn * (Rational::from(&a * &half_beta) + 1u32 + Rational::from(&b * (nn.clone() - 1u32)) / 2u32),
    );
    let two_over_beta = Float::with_val(w, &(Rational::from(2) / &b));
    let mut acc = Float::with_val(w, &expo) * two_over_beta.ln();
    let base = lgamma_q(&(Rational::from(1) + &half_beta), w)?;
    for j in 1..=n {
        let g1 = Rational::from(1) + Rational::from(&half_beta * j as u32);
        let g2 = Rational::from(1) + Rational::from((a.clone() + (j as i64 - 1)) * &half_beta);
        acc += lgamma_q(&g1, w)?;
        acc += lgamma_q(&g2, w)?;
        acc -= &base;
    }
    Ok(LogConstant { log_value: Float::with_val(prec, acc) })
}

/// `log M_n(A, B, C)` with
/// `M_n = prod_{j=1}^n Gamma(1+A+B-C+jC) Gamma(1+jC) / (Gamma(1+A-C+jC) Gamma(1+B-C+jC) Gamma(1+C))`.
pub fn log_mehta_m(n: usize, a: &BigRational, b: &BigRational, c: &BigRational, prec: u32) -> Result<LogConstant> {
    let w = prec + 32;
    let (a, b, c) = (to_rug_rational(a), to_rug_rational(b), to_rug_rational(c));
    let mut acc = Float::with_val(w, 0);
    for j in 1..=n as i64 {
        let jc = Rational::from(&c * j);
        let one_minus_c = Rational::from(1) - &c;
        let num1 = Rational::from(&a + &b) + &one_minus_c + &jc;
        let num2 = Rational::from(1) + &jc;
        let den1 = Rational::from(&a + &one_minus_c) + &jc;
        let den2 = Rational::from(&b + &one_minus_c) + &jc;
        let den3 = Rational::from(1) + &c;
        acc += lgamma_q(&num1, w)?;
        acc += lgamma_q(&num2, w)?;
        acc -= lgamma_q(&den1, w)?;
        acc -= lgamma_q(&den2, w)?;
        acc -= lgamma_q(&den3, w)?;
    }
    Ok(LogConstant { log_value: Float::with_val(prec, acc) })
}

/// Partition function of `n` particles of the given family.
pub fn log_partition(family: &Family, beta: u32, n: usize, matrix_size: usize, prec: u32) -> Result<LogConstant> {
    match family {
        Family::Gaussian => Ok(log_gaussian_z(beta, n, prec)),
        _ => {
            let a = family.laguerre_a(matrix_size).expect("Laguerre family");
            log_laguerre_z(&a, beta, n, prec)
        }
    }
}

/// Exact-coefficient density of an `N x N` matrix ensemble, ready to be
/// evaluated anywhere in its support.
#[derive(Clone, Debug)]
pub struct FiniteDensity {
    ensemble: Ensemble,
    n: usize,
    a: Option<BigRational>,
    coeffs: Vec<Rational>,
    deriv_coeffs: Vec<Rational>,
    log_prefactor: Float,
    prec: u32,
    backend: String,
}

impl FiniteDensity {
    /// Run the exact-rational recurrence and assemble the density.
    pub fn new(ensemble: &Ensemble, n: usize, prec: u32) -> Result<Self> {
        Self::with_backend::<BigRational, _>(ensemble, n, prec, |_, _| {})
    }

    pub fn with_backend<T, P>(ensemble: &Ensemble, n: usize, prec: u32, progress: P) -> Result<Self>
    where
        T: Coefficient,
        P: FnMut(u32, usize),
    {
        let spec = ensemble.spec_for_density(n)?;
        let poly = run_full_recurrence_with_progress::<T, _>(&spec, progress)?;
        Self::from_poly(ensemble, n, &poly, prec)
    }

    /// Assemble from a precomputed average polynomial over `n - 1` particles.
    pub fn from_poly<T: Coefficient>(ensemble: &Ensemble, n: usize, poly: &BigPoly<T>, prec: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Inadmissible("matrix size must be >= 1".into()));
        }
        let beta = ensemble.beta;
        let z_prev = log_partition(&ensemble.family, beta, n - 1, n, prec + 64)?;
        let z_curr = log_partition(&ensemble.family, beta, n, n, prec + 64)?;
        let mut log_prefactor = Float::with_val(prec + 64, n as u32).ln();
        log_prefactor += &z_prev.log_value;
        log_prefactor -= &z_curr.log_value;
        let coeffs: Vec<Rational> = poly.coeffs().iter().map(Coefficient::to_rug).collect();
        let deriv_coeffs = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| Rational::from(c * k as u32))
            .collect();
        Ok(FiniteDensity {
            ensemble: ensemble.clone(),
            n,
            a: ensemble.family.laguerre_a(n),
            coeffs,
            deriv_coeffs,
            log_prefactor,
            prec,
            backend: T::backend_name(),
        })
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> u32 {
        self.ensemble.beta
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn backend(&self) -> &str {
        &self.backend
    }

    pub fn laguerre_a(&self) -> Option<&BigRational> {
        self.a.as_ref()
    }

    pub fn poly_coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `ln N + ln Z_{N-1} - ln Z_N`.
    pub fn log_prefactor(&self) -> &Float {
        &self.log_prefactor
    }

    /// The polynomial average at `x`.
    pub fn poly_value(&self, x: &Float) -> Float {
        eval_exact_poly(&self.coeffs, x, self.prec)
    }

    fn poly_derivative(&self, x: &Float) -> Float {
        eval_exact_poly(&self.deriv_coeffs, x, self.prec)
    }

    fn weight_exponent(&self) -> Option<Rational> {
        self.a
            .as_ref()
            .map(|a| to_rug_rational(a) * Rational::from((self.beta() as i64, 2)))
    }

    /// `ln w(x)`, or `None` where the weight vanishes (Laguerre origin with a
    /// positive exponent).
    fn log_weight(&self, x: &Float) -> Result<Option<Float>> {
        let w = self.prec + 64;
        let beta = self.beta();
        match self.weight_exponent() {
            None => {
                let x2 = Float::with_val(w, x.square_ref());
                Ok(Some(-(x2 * beta) / 2u32))
            }
            Some(e) => {
                if x.is_sign_negative() && !x.is_zero() {
                    return Err(Error::OutOfSupport(to_decimal(x, 20)));
                }
                if x.is_zero() {
                    return match e.cmp0() {
                        std::cmp::Ordering::Equal => Ok(Some(Float::with_val(w, 0))),
                        std::cmp::Ordering::Greater => Ok(None),
                        std::cmp::Ordering::Less => Err(Error::OutOfSupport("0".into())),
                    };
                }
                let lx = Float::with_val(w, x.ln_ref());
                Ok(Some(lx * Float::with_val(w, &e) - Float::with_val(w, x * beta) / 2u32))
            }
        }
    }

    fn checked_poly(&self, x: &Float) -> Result<Float> {
        let p = self.poly_value(x);
        if p.is_zero() || p.is_sign_negative() {
            return Err(Error::NegativePolyValue { x: to_decimal(x, 20), value: to_decimal(&p, 20) });
        }
        Ok(p)
    }

    /// `rho_N(x)`.
    pub fn eval(&self, x: &Float) -> Result<Float> {
        let Some(lw) = self.log_weight(x)? else {
            return Ok(Float::with_val(self.prec, 0));
        };
        let p = self.checked_poly(x)?;
        let scale = (lw + &self.log_prefactor).exp();
        Ok(Float::with_val(self.prec, scale * p))
    }

    /// `d rho_N / dx`, from the exact derivative of the polynomial and the
    /// logarithmic derivative of the weight.
    pub fn eval_derivative(&self, x: &Float) -> Result<Float> {
        let w = self.prec + 64;
        let Some(lw) = self.log_weight(x)? else {
            return Err(Error::OutOfSupport(to_decimal(x, 20)));
        };
        let p = self.checked_poly(x)?;
        let dp = self.poly_derivative(x);
        let beta = self.beta();
        let dlw = match self.weight_exponent() {
            None => -Float::with_val(w, x * beta),
            Some(e) => Float::with_val(w, &e) / Float::with_val(w, x) - Float::with_val(w, beta) / 2u32,
        };
        let scale = (lw + &self.log_prefactor).exp();
        let total = Float::with_val(w, &scale * &p) * dlw + scale * dp;
        Ok(Float::with_val(self.prec, total))
    }

    pub fn meta(&self) -> TableMeta {
        let (a, alpha_ratio) = match &self.ensemble.family {
            Family::Gaussian => (None, None),
            Family::LaguerreFixed { a } => (Some(a.to_string()), None),
            Family::LaguerreProportional { alpha_ratio } => {
                (self.a.as_ref().map(ToString::to_string), Some(alpha_ratio.to_string()))
            }
        };
        TableMeta {
            ensemble: self.ensemble.family.kind().to_string(),
            beta: self.beta(),
            n: self.n,
            a,
            alpha_ratio,
            scaling: None,
            precision_bits: self.prec,
            backend: self.backend.clone(),
            version: VERSION.to_string(),
        }
    }

    /// Unscaled density over raw coordinates.
    pub fn table(&self, grid: &[Float]) -> Result<DensityTable> {
        let values = grid.iter().map(|x| self.eval(x)).collect::<Result<Vec<_>>>()?;
        Ok(DensityTable { grid: grid.to_vec(), values, meta: self.meta() })
    }
}

/// `rho_N` of the given ensemble on a grid of raw coordinates.
pub fn density(ensemble: &Ensemble, n: usize, grid: &[Float], prec: u32) -> Result<DensityTable> {
    FiniteDensity::new(ensemble, n, prec)?.table(grid)
}
