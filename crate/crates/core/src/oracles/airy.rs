//! Airy function `Ai` and its derivatives in arbitrary precision.
//!
//! The Maclaurin series is summed at a working precision raised by the
//! cancellation it suffers (about `2 zeta / ln 2` bits with
//! `zeta = (2/3)|x|^(3/2)`), which keeps every value correct to the
//! requested precision over the whole documented range `|x| <= 40`. The
//! large-argument asymptotic expansions are provided separately and serve as
//! an independent cross-check where they are accurate.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Largest `|x|` accepted.
pub const AIRY_RANGE: f64 = 40.0;

/// `Ai(x)` and `Ai'(x)` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct AiryPair {
    pub ai: Float,
    pub ai_prime: Float,
}

fn zeta_bits(x: f64) -> u32 {
    let zeta = 2.0 / 3.0 * x.abs().powf(1.5);
    (2.0 * zeta / std::f64::consts::LN_2).ceil() as u32
}

fn check_range(x: &Float) -> Result<()> {
    if !x.is_finite() || x.to_f64().abs() > AIRY_RANGE {
        return Err(Error::RangeExceeded(x.to_string_radix(10, Some(12))));
    }
    Ok(())
}

/// `Ai(0) = 3^(-2/3) / Gamma(2/3)` and `-Ai'(0) = 3^(-1/3) / Gamma(1/3)`.
fn origin_values(prec: u32) -> (Float, Float) {
    let three = Float::with_val(prec, 3);
    let third = Float::with_val(prec, 1) / 3u32;
    let two_thirds = Float::with_val(prec, 2) / 3u32;
    let c1 = Float::with_val(prec, three.clone().pow(-two_thirds.clone())) / two_thirds.gamma();
    let c2 = Float::with_val(prec, three.pow(-third.clone())) / third.gamma();
    (c1, c2)
}

/// Maclaurin sums of `Ai`, `Ai'`, `Ai''`.
///
/// With `Ai = sum c_m x^m`, the coefficients obey
/// `(m + 2)(m + 3) c_{m+3} = c_m`, `c_0 = Ai(0)`, `c_1 = Ai'(0)`, `c_2 = 0`.
fn maclaurin(x: &Float, prec: u32) -> [Float; 3] {
    let xf = x.to_f64();
    let w = prec + 64 + zeta_bits(xf);
    let xw = Float::with_val(w, x);
    let (c1, c2) = origin_values(w);
    // Two interleaved coefficient chains; c_2 = 0 kills the third.
    let mut coeff = [c1, -c2];
    let mut sums = [Float::with_val(w, 0), Float::with_val(w, 0), Float::with_val(w, 0)];
    let mut max_term = Float::with_val(w, 0);
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let min_terms = (2.0 * xf.abs().powf(1.5) + 12.0) as u64;
    // x^(m-2), x^(m-1), x^m
    let mut m: u64 = 0;
    let mut quiet = 0;
    loop {
        for (chain, start) in [0u64, 1].into_iter().enumerate() {
            let mm = m + start;
            let c = &coeff[chain];
            let term = if mm == 0 {
                Float::with_val(w, c)
            } else {
                Float::with_val(w, xw.clone().pow(mm as u32)) * c
            };
            sums[0] += &term;
            if mm >= 1 {
                let d1 = Float::with_val(w, c * mm) * Float::with_val(w, xw.clone().pow((mm - 1) as u32));
                sums[1] += d1;
            }
            if mm >= 2 {
                let d2 = Float::with_val(w, c * (mm * (mm - 1))) * Float::with_val(w, xw.clone().pow((mm - 2) as u32));
                sums[2] += d2;
            }
            let at = Float::with_val(w, term.abs_ref());
            if at > max_term {
                max_term = at.clone();
            }
            if mm > min_terms && at <= Float::with_val(w, &max_term * &eps) {
                quiet += 1;
            } else {
                quiet = 0;
            }
        }
        // advance both chains by three powers
        for (chain, start) in [0u64, 1].into_iter().enumerate() {
            let mm = m + start;
            let denom = (mm + 2) * (mm + 3);
            coeff[chain] /= denom as f64;
        }
        m += 3;
        if quiet >= 4 {
            break;
        }
    }
    sums.map(|s| Float::with_val(prec, s))
}

/// `Ai(x)` and `Ai'(x)` with the precision of `x` (at least 128 bits).
pub fn airy(x: &Float) -> Result<AiryPair> {
    airy_prec(x, x.prec().max(128))
}

pub fn airy_prec(x: &Float, prec: u32) -> Result<AiryPair> {
    check_range(x)?;
    let [ai, ai_prime, _] = maclaurin(x, prec);
    Ok(AiryPair { ai, ai_prime })
}

/// `Ai''(x)` summed from its own series, not from the differential equation.
pub fn airy_second_derivative(x: &Float, prec: u32) -> Result<Float> {
    check_range(x)?;
    let [_, _, second] = maclaurin(x, prec);
    Ok(second)
}

/// Coefficients `u_k` of the large-argument expansions,
/// `u_k = (2k+1)(2k+3)...(6k-1) / (216^k k!)`, and `v_k = -(6k+1)/(6k-1) u_k`.
fn asymptotic_coefficients(count: usize, prec: u32) -> (Vec<Float>, Vec<Float>) {
    let mut u = vec![Float::with_val(prec, 1)];
    let mut v = vec![Float::with_val(prec, 1)];
    for k in 1..count as u64 {
        let prev = u[k as usize - 1].clone();
        let num = (6 * k - 5) * (6 * k - 3) * (6 * k - 1);
        let den = (2 * k - 1) * 216 * k;
        let uk = prev * num as f64 / den as f64;
        let vk = Float::with_val(prec, &uk * (6 * k + 1) as f64) / (6 * k - 1) as f64;
        v.push(-vk);
        u.push(uk);
    }
    (u, v)
}

/// Large-argument expansion of `Ai`, `Ai'`, truncated at the smallest term.
///
/// Returns the pair and the magnitude of the first omitted term relative to
/// the leading one, a rough accuracy estimate.
pub fn airy_asymptotic(x: &Float, prec: u32) -> Result<(AiryPair, f64)> {
    check_range(x)?;
    let w = prec + 32;
    let xw = Float::with_val(w, x);
    let z = Float::with_val(w, xw.abs_ref());
    if z < 1 {
        return Err(Error::RangeExceeded(x.to_string_radix(10, Some(12))));
    }
    let zeta = Float::with_val(w, z.clone().pow(1.5)) * 2u32 / 3u32;
    let sqrt_pi = Float::with_val(w, Constant::Pi).sqrt();
    let quarter = Float::with_val(w, z.clone().pow(0.25));
    let (u, v) = asymptotic_coefficients(200, w);

    // truncate where |u_k / zeta^k| stops decreasing
    let mut terms_u = Vec::new();
    let mut terms_v = Vec::new();
    let mut zk = Float::with_val(w, 1);
    let mut last = Float::with_val(w, f64::INFINITY);
    let mut omitted = 0.0;
    for k in 0..u.len() {
        let tu = Float::with_val(w, &u[k] / &zk);
        let mag = Float::with_val(w, tu.abs_ref());
        if mag > last {
            omitted = mag.to_f64();
            break;
        }
        last = mag;
        terms_u.push(tu);
        terms_v.push(Float::with_val(w, &v[k] / &zk));
        zk *= &zeta;
    }

    let pair = if x.is_sign_positive() {
        let alt = |t: &[Float]| {
            t.iter().enumerate().fold(Float::with_val(w, 0), |acc, (k, tk)| {
                if k % 2 == 0 { acc + tk } else { acc - tk }
            })
        };
        let e = Float::with_val(w, (-zeta.clone()).exp());
        let ai = Float::with_val(w, &e / &sqrt_pi) / Float::with_val(w, &quarter * 2u32) * alt(&terms_u);
        let ai_prime = -(Float::with_val(w, &e * &quarter) / Float::with_val(w, &sqrt_pi * 2u32)) * alt(&terms_v);
        AiryPair { ai, ai_prime }
    } else {
        // Even and odd parts with alternating signs.
        let split = |t: &[Float]| {
            let mut even = Float::with_val(w, 0);
            let mut odd = Float::with_val(w, 0);
            for (k, tk) in t.iter().enumerate() {
                let sign_neg = (k / 2) % 2 == 1;
                let target = if k % 2 == 0 { &mut even } else { &mut odd };
                if sign_neg {
                    *target -= tk;
                } else {
                    *target += tk;
                }
            }
            (even, odd)
        };
        let phase = Float::with_val(w, &zeta + Float::with_val(w, Constant::Pi) / 4u32);
        let (s, c) = phase.sin_cos(Float::new(w));
        let (ue, uo) = split(&terms_u);
        let (ve, vo) = split(&terms_v);
        let ai = (Float::with_val(w, &s * &ue) - Float::with_val(w, &c * &uo)) / (Float::with_val(w, &sqrt_pi * &quarter));
        let ai_prime = -(Float::with_val(w, &quarter / &sqrt_pi))
            * (Float::with_val(w, &c * &ve) + Float::with_val(w, &s * &vo));
        AiryPair { ai, ai_prime }
    };
    Ok((
        AiryPair { ai: Float::with_val(prec, pair.ai), ai_prime: Float::with_val(prec, pair.ai_prime) },
        omitted,
    ))
}

/// `Ai(x)` in double precision, for plotting-grade work.
pub fn airy_f64(x: f64) -> Result<(f64, f64)> {
    let p = airy_prec(&Float::with_val(128, x), 128)?;
    Ok((p.ai.to_f64(), p.ai_prime.to_f64()))
}
