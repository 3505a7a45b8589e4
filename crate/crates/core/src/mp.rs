//! Multiprecision helpers on top of MPFR floats.
//!
//! Everything here works on [`rug::Float`] at an explicit precision. The
//! exact-rational world (`num_rational::BigRational`) meets the float world
//! through [`to_rug_rational`].

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use rug::float::Constant;
use rug::integer::Order;
use rug::{Float, Integer, Rational};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 512;

pub fn to_rug_integer(n: &BigInt) -> Integer {
    let (sign, bytes) = n.to_bytes_le();
    let mag = Integer::from_digits(&bytes, Order::Lsf);
    match sign {
        Sign::Minus => -mag,
        _ => mag,
    }
}

pub fn to_rug_rational(q: &BigRational) -> Rational {
    Rational::from((to_rug_integer(q.numer()), to_rug_integer(q.denom())))
}

pub fn from_rug_integer(n: &Integer) -> BigInt {
    let bytes = n.to_digits::<u8>(Order::Lsf);
    let mag = BigInt::from_bytes_le(Sign::Plus, &bytes);
    if n.is_negative() {
        -mag
    } else {
        mag
    }
}

pub fn from_rug_rational(q: &Rational) -> BigRational {
    BigRational::new(from_rug_integer(q.numer()), from_rug_integer(q.denom()))
}

pub fn float(prec: u32, v: impl Into<f64>) -> Float {
    Float::with_val(prec, v.into())
}

pub fn from_rational(prec: u32, q: &Rational) -> Float {
    Float::with_val(prec, q)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Parse a plain decimal literal such as `-0.05` or `1e-3` into an exact
/// rational. Binary floats never enter grid or parameter values this way.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = if all.is_empty() { BigInt::from(0) } else { all.parse().ok()? };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Decimal rendering with `digits` significant digits, e.g. `1.2345e-3`.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = x.to_string_radix(10, Some(digits.max(1)));
    s
}

/// Exact product split: `a * b = hi + lo` with `hi` rounded to `prec` bits.
fn two_prod(a: &Float, b: &Float, prec: u32) -> (Float, Float) {
    let exact = Float::with_val(a.prec() + b.prec(), a * b);
    let hi = Float::with_val(prec, &exact);
    let lo = Float::with_val(prec, &exact - &hi);
    (hi, lo)
}

/// Error-free sum (Knuth): `a + b = s + e`.
fn two_sum(a: &Float, b: &Float, prec: u32) -> (Float, Float) {
    let s = Float::with_val(prec, a + b);
    let bb = Float::with_val(prec, &s - a);
    let t1 = Float::with_val(prec, &s - &bb);
    let t2 = Float::with_val(prec, a - &t1);
    let t3 = Float::with_val(prec, b - &bb);
    let e = Float::with_val(prec, &t2 + &t3);
    (s, e)
}

/// Compensated Horner evaluation of `sum coeffs[k] x^k`.
///
/// The result is as accurate as if Horner had run in twice the precision,
/// then rounded to `prec` bits.
pub fn compensated_horner(coeffs: &[Float], x: &Float, prec: u32) -> Float {
    let Some(last) = coeffs.last() else {
        return Float::with_val(prec, 0);
    };
    let x = Float::with_val(prec, x);
    let mut s = Float::with_val(prec, last);
    let mut c = Float::with_val(prec, 0);
    for a in coeffs.iter().rev().skip(1) {
        let (p, pi_err) = two_prod(&s, &x, prec);
        let (ns, sigma) = two_sum(&p, a, prec);
        s = ns;
        c = Float::with_val(prec, &c * &x);
        c += Float::with_val(prec, &pi_err + &sigma);
    }
    s + c
}

/// `sum |coeffs[k]| |x|^k`, the running-error scale of Horner's rule.
pub fn horner_abs_bound(coeffs: &[Float], x: &Float, prec: u32) -> Float {
    let ax = Float::with_val(prec, x.abs_ref());
    let mut s = Float::with_val(prec, 0);
    for a in coeffs.iter().rev() {
        s *= &ax;
        s += Float::with_val(prec, a.abs_ref());
    }
    s
}

/// Evaluate an exact-rational polynomial at `x` so that the result carries
/// `prec` correct bits, raising the working precision until the rounding
/// of coefficients and arithmetic cannot reach them.
pub fn eval_exact_poly(coeffs: &[Rational], x: &Float, prec: u32) -> Float {
    let mut work = prec + 64;
    loop {
        let fc: Vec<Float> = coeffs.iter().map(|q| Float::with_val(work, q)).collect();
        let xw = Float::with_val(work, x);
        let v = compensated_horner(&fc, &xw, work);
        let bound = horner_abs_bound(&fc, &xw, 64);
        if v.is_zero() {
            if bound.is_zero() {
                return Float::with_val(prec, 0);
            }
            work *= 2;
            if work > 1 << 20 {
                return Float::with_val(prec, 0);
            }
            continue;
        }
        // log2 of the condition number sum|c||x|^k / |p(x)|.
        let cond_bits = {
            let r = Float::with_val(64, &bound / Float::with_val(64, v.abs_ref()));
            let l = r.log2();
            l.to_f64().max(0.0).ceil() as u32
        };
        if cond_bits + prec + 16 <= work {
            return Float::with_val(prec, &v);
        }
        work = cond_bits + prec + 64;
    }
}

/// Natural log of Gamma(x) for x > 0.
pub fn ln_gamma(x: &Float) -> Float {
    x.clone().ln_gamma()
}
