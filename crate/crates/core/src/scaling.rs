//! Soft-edge changes of variable `s(x) = offset + scale * x`.
//!
//! | case | offset | scale |
//! |------|--------|-------|
//! | Gaussian | `sqrt(2N)` (+ `(1/2 - 1/beta)/sqrt(2N)` centred) | `1/(sqrt(2) N^(1/6))` |
//! | Laguerre, fixed `a` | `4N + 2a` (`4N` primed) | `2 (2N)^(1/3)` |
//! | Laguerre, `a = alpha N` | `N (sqrt(1+alpha) + 1)^2` (+ `alpha/sqrt(1+alpha) (1/2 - 1/beta)` centred) | `2 (bN)^(1/3)` |
//!
//! with `b = (1/sqrt(1+alpha) + 1) ((sqrt(1+alpha) + 1)/2)^3`. For fixed `a`
//! the centred and uncentred maps coincide.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, Family};
use crate::error::{Error, Result};
use crate::mp::{to_decimal, to_rug_rational};
use crate::normalization::FiniteDensity;
use crate::table::{DensityTable, ScalingMeta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalingCase {
    GaussianUncentred,
    GaussianCentred,
    LaguerreFixedUncentred,
    LaguerreFixedPrimed,
    LaguerreFixedCentred,
    LaguerreProportionalUncentred,
    LaguerreProportionalCentred,
}

/// How the offset is chosen, independently of the ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Centring {
    Uncentred,
    Centred,
    /// The comparison map of the derivative diagnostic: uncentred, except
    /// that fixed-`a` Laguerre drops the `2a` shift as well.
    Primed,
}

impl FromStr for Centring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uncentred" | "uncentered" => Ok(Centring::Uncentred),
            "centred" | "centered" => Ok(Centring::Centred),
            "primed" => Ok(Centring::Primed),
            _ => Err(Error::Inadmissible(format!("unknown scaling `{s}`"))),
        }
    }
}

impl fmt::Display for Centring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Centring::Uncentred => "uncentred",
            Centring::Centred => "centred",
            Centring::Primed => "primed",
        })
    }
}

impl ScalingCase {
    pub fn for_family(family: &Family, centring: Centring) -> Self {
        use ScalingCase::*;
        match (family, centring) {
            (Family::Gaussian, Centring::Centred) => GaussianCentred,
            (Family::Gaussian, _) => GaussianUncentred,
            (Family::LaguerreFixed { .. }, Centring::Centred) => LaguerreFixedCentred,
            (Family::LaguerreFixed { .. }, Centring::Uncentred) => LaguerreFixedUncentred,
            (Family::LaguerreFixed { .. }, Centring::Primed) => LaguerreFixedPrimed,
            (Family::LaguerreProportional { .. }, Centring::Centred) => LaguerreProportionalCentred,
            (Family::LaguerreProportional { .. }, _) => LaguerreProportionalUncentred,
        }
    }

    fn name(self) -> &'static str {
        use ScalingCase::*;
        match self {
            GaussianUncentred => "gaussian-uncentred",
            GaussianCentred => "gaussian-centred",
            LaguerreFixedUncentred => "laguerre-fixed-uncentred",
            LaguerreFixedPrimed => "laguerre-fixed-primed",
            LaguerreFixedCentred => "laguerre-fixed-centred",
            LaguerreProportionalUncentred => "laguerre-proportional-uncentred",
            LaguerreProportionalCentred => "laguerre-proportional-centred",
        }
    }

    fn is_gaussian(self) -> bool {
        matches!(self, ScalingCase::GaussianCentred | ScalingCase::GaussianUncentred)
    }

    fn is_proportional(self) -> bool {
        matches!(
            self,
            ScalingCase::LaguerreProportionalCentred | ScalingCase::LaguerreProportionalUncentred
        )
    }
}

impl fmt::Display for ScalingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An affine soft-edge map together with the constants it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingMap {
    pub case: ScalingCase,
    pub n: usize,
    pub beta: u32,
    /// `a` for the fixed Laguerre cases.
    pub a: Option<BigRational>,
    /// `alpha` for the proportional cases.
    pub alpha_ratio: Option<BigRational>,
    pub offset: Float,
    pub scale: Float,
    pub b: Option<Float>,
    pub k_sharp: Float,
}

/// `b = (1/sqrt(1+alpha) + 1) ((sqrt(1+alpha) + 1)/2)^3`.
pub fn b_constant(alpha_ratio: &BigRational, prec: u32) -> Float {
    let r = Float::with_val(prec, &(Rational::from(1) + to_rug_rational(alpha_ratio))).sqrt();
    let first = Float::with_val(prec, r.recip_ref()) + 1u32;
    let second = Float::with_val(prec, &r + 1u32) / 2u32;
    let cube = Float::with_val(prec, second.square_ref()) * &second;
    first * cube
}

/// `1/2 - 1/beta`.
fn centring_shift(beta: u32) -> Rational {
    Rational::from((1, 2)) - Rational::from((1, beta as i64))
}

/// The shift constant `k#` of the derivative diagnostic:
/// `1/2 - 1/beta` (Gaussian), `a / 2^(1/3)` (fixed Laguerre),
/// `alpha/sqrt(1+alpha) (1/2 - 1/beta) / (2 b^(1/3))` (proportional).
pub fn k_sharp(family: &Family, beta: u32, prec: u32) -> Result<Float> {
    let k = k_sharp_raw(family, beta, prec);
    if k.is_zero() {
        return Err(Error::ZeroK);
    }
    Ok(k)
}

fn k_sharp_raw(family: &Family, beta: u32, prec: u32) -> Float {
    match family {
        Family::Gaussian => Float::with_val(prec, &centring_shift(beta)),
        Family::LaguerreFixed { a } => {
            let cbrt2 = Float::with_val(prec, 2).cbrt();
            Float::with_val(prec, &to_rug_rational(a)) / cbrt2
        }
        Family::LaguerreProportional { alpha_ratio } => {
            let alpha = Float::with_val(prec, &to_rug_rational(alpha_ratio));
            let b = b_constant(alpha_ratio, prec);
            let r = Float::with_val(prec, &alpha + 1u32).sqrt();
            let shift = Float::with_val(prec, &centring_shift(beta));
            alpha / r * shift / (b.cbrt() * 2u32)
        }
    }
}

impl ScalingMap {
    /// Build the map for `case` at matrix size `n`; `param` is `a` for the
    /// fixed Laguerre cases and `alpha_ratio` for the proportional ones.
    pub fn new(case: ScalingCase, n: usize, beta: u32, param: Option<&BigRational>, prec: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Inadmissible("matrix size must be >= 1".into()));
        }
        if beta == 0 || beta % 2 != 0 {
            return Err(Error::Inadmissible(format!("beta must be a positive even integer, got {beta}")));
        }
        let nf = Float::with_val(prec, n as u32);
        let family = if case.is_gaussian() {
            Family::Gaussian
        } else {
            let p = param
                .cloned()
                .ok_or_else(|| Error::Inadmissible(format!("{case} requires a parameter")))?;
            if case.is_proportional() {
                Family::LaguerreProportional { alpha_ratio: p }
            } else {
                Family::LaguerreFixed { a: p }
            }
        };
        // Reuse the admissibility checks of the ensemble itself.
        Ensemble::new(family.clone(), beta)?;

        let shift = Float::with_val(prec, &centring_shift(beta));
        let (offset, scale, b, a, alpha_ratio) = match &family {
            Family::Gaussian => {
                let root = Float::with_val(prec, &nf * 2u32).sqrt();
                let scale = Float::with_val(prec, 2).sqrt().recip() / nf.clone().root(6);
                let offset = match case {
                    ScalingCase::GaussianCentred => Float::with_val(prec, &shift / &root) + &root,
                    _ => root,
                };
                (offset, scale, None, None, None)
            }
            Family::LaguerreFixed { a } => {
                let scale = Float::with_val(prec, &nf * 2u32).cbrt() * 2u32;
                let four_n = Float::with_val(prec, &nf * 4u32);
                let offset = match case {
                    ScalingCase::LaguerreFixedPrimed => four_n,
                    _ => four_n + Float::with_val(prec, &to_rug_rational(a)) * 2u32,
                };
                (offset, scale, None, Some(a.clone()), None)
            }
            Family::LaguerreProportional { alpha_ratio } => {
                let b = b_constant(alpha_ratio, prec);
                let alpha = Float::with_val(prec, &to_rug_rational(alpha_ratio));
                let r = Float::with_val(prec, &alpha + 1u32).sqrt();
                let scale = Float::with_val(prec, &b * &nf).cbrt() * 2u32;
                let base = Float::with_val(prec, &r + 1u32).square() * &nf;
                let offset = match case {
                    ScalingCase::LaguerreProportionalCentred => base + alpha / &r * &shift,
                    _ => base,
                };
                (offset, scale, Some(b), None, Some(alpha_ratio.clone()))
            }
        };
        let k = k_sharp_raw(&family, beta, prec);
        Ok(ScalingMap { case, n, beta, a, alpha_ratio, offset, scale, b, k_sharp: k })
    }

    pub fn for_ensemble(ensemble: &Ensemble, centring: Centring, n: usize, prec: u32) -> Result<Self> {
        let case = ScalingCase::for_family(&ensemble.family, centring);
        let param = match &ensemble.family {
            Family::Gaussian => None,
            Family::LaguerreFixed { a } => Some(a),
            Family::LaguerreProportional { alpha_ratio } => Some(alpha_ratio),
        };
        Self::new(case, n, ensemble.beta, param, prec)
    }

    pub fn prec(&self) -> u32 {
        self.offset.prec()
    }

    /// `offset + scale * x`.
    pub fn apply(&self, x: &Float) -> Float {
        let p = self.prec().max(x.prec());
        Float::with_val(p, &self.scale * x) + &self.offset
    }

    /// `(s - offset) / scale`.
    pub fn invert(&self, s: &Float) -> Float {
        let p = self.prec().max(s.prec());
        Float::with_val(p, s - &self.offset) / &self.scale
    }

    /// `ds/dx`.
    pub fn jacobian(&self) -> &Float {
        &self.scale
    }

    pub fn k_sharp(&self) -> Result<&Float> {
        if self.k_sharp.is_zero() {
            Err(Error::ZeroK)
        } else {
            Ok(&self.k_sharp)
        }
    }

    pub fn meta(&self) -> ScalingMeta {
        ScalingMeta {
            case: self.case.to_string(),
            offset: to_decimal(&self.offset, 40),
            scale: to_decimal(&self.scale, 40),
            b: self.b.as_ref().map(|b| to_decimal(b, 40)),
            k_sharp: Some(to_decimal(&self.k_sharp, 40)),
        }
    }
}

/// `scale * rho_N(s(x))` over the scaled grid.
pub fn scaled_density(map: &ScalingMap, density: &FiniteDensity, grid: &[Float]) -> Result<DensityTable> {
    let values = grid
        .iter()
        .map(|x| {
            let s = map.apply(x);
            let rho = density.eval(&s)?;
            Ok(Float::with_val(density.prec(), rho * &map.scale))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = density.meta();
    meta.scaling = Some(map.meta());
    Ok(DensityTable { grid: grid.to_vec(), values, meta })
}
