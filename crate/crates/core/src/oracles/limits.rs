//! Closed forms at beta = 2: the Airy-kernel diagonal and the three
//! `N^(-2/3)` correction functions of the soft-edge scaled density.

use num_rational::BigRational;
use rug::Float;

use crate::error::Result;
use crate::mp::to_rug_rational;
use crate::oracles::airy::airy_prec;
use crate::scaling::b_constant;

/// Which ensemble's correction function.
#[derive(Clone, Debug, PartialEq)]
pub enum CorrectionCase {
    Gaussian,
    LaguerreFixed,
    LaguerreProportional { alpha_ratio: BigRational },
}

/// `Ai'(x)^2 - x Ai(x)^2`.
pub fn rho_limit_beta2(x: &Float, prec: u32) -> Result<Float> {
    let p = airy_prec(x, prec + 16)?;
    let w = prec + 16;
    let v = Float::with_val(w, p.ai_prime.square_ref()) - Float::with_val(w, p.ai.square_ref()) * x;
    Ok(Float::with_val(prec, v))
}

/// The coefficient of `N^(-2/3)` in the large-N expansion of the scaled
/// beta = 2 density:
///
/// * Gaussian: `-(3 x^2 Ai^2 - 2 x Ai'^2 - 3 Ai Ai') / 20`
/// * fixed Laguerre: `2^(1/3) (3 x^2 Ai^2 - 2 x Ai'^2 + 2 Ai Ai') / 10`
/// * proportional Laguerre: `(1/(2 b^(2/3))) [c1 x^2 Ai^2 + c2 Ai Ai' + c3 x Ai'^2]` with
///   `c1 = 3b/(5 sqrt(1+alpha)) - 3 alpha^2/(20 (1+alpha))`,
///   `c2 = 2b/(5 sqrt(1+alpha)) + alpha^2/(40 (1+alpha))`,
///   `c3 = -2b/(5 sqrt(1+alpha)) + alpha^2/(10 (1+alpha))`.
pub fn rho_correction_beta2(case: &CorrectionCase, x: &Float, prec: u32) -> Result<Float> {
    let w = prec + 16;
    let p = airy_prec(x, w)?;
    let xw = Float::with_val(w, x);
    let ai2 = Float::with_val(w, p.ai.square_ref());
    let aip2 = Float::with_val(w, p.ai_prime.square_ref());
    let cross = Float::with_val(w, &p.ai * &p.ai_prime);
    let x2ai2 = Float::with_val(w, xw.square_ref()) * &ai2;
    let xaip2 = Float::with_val(w, &xw * &aip2);

    let v = match case {
        CorrectionCase::Gaussian => {
            let inner = Float::with_val(w, &x2ai2 * 3u32) - Float::with_val(w, &xaip2 * 2u32) - Float::with_val(w, &cross * 3u32);
            -inner / 20u32
        }
        CorrectionCase::LaguerreFixed => {
            let inner = Float::with_val(w, &x2ai2 * 3u32) - Float::with_val(w, &xaip2 * 2u32) + Float::with_val(w, &cross * 2u32);
            Float::with_val(w, 2).cbrt() * inner / 10u32
        }
        CorrectionCase::LaguerreProportional { alpha_ratio } => {
            let alpha = Float::with_val(w, &to_rug_rational(alpha_ratio));
            let b = b_constant(alpha_ratio, w);
            let one_plus = Float::with_val(w, &alpha + 1u32);
            let b_over = Float::with_val(w, &b / Float::with_val(w, one_plus.sqrt_ref()));
            let a2 = Float::with_val(w, alpha.square_ref()) / &one_plus;
            let c1 = Float::with_val(w, &b_over * 3u32) / 5u32 - Float::with_val(w, &a2 * 3u32) / 20u32;
            let c2 = Float::with_val(w, &b_over * 2u32) / 5u32 + Float::with_val(w, &a2 / 40u32);
            let c3 = -Float::with_val(w, &b_over * 2u32) / 5u32 + Float::with_val(w, &a2 / 10u32);
            let bracket = c1 * &x2ai2 + c2 * &cross + c3 * &xaip2;
            let b23 = Float::with_val(w, b.square_ref()).cbrt();
            bracket / (b23 * 2u32)
        }
    };
    Ok(Float::with_val(prec, v))
}
