//! Uniform grids with exact rational nodes.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{parse_decimal, to_rug_rational};

/// `min, min + step, ..., <= max`, parsed from `min:max:step`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub min: BigRational,
    pub max: BigRational,
    pub step: BigRational,
    text: String,
}

impl GridSpec {
    pub fn new(min: BigRational, max: BigRational, step: BigRational) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::Inadmissible(format!("grid step must be > 0, got {step}")));
        }
        if max < min {
            return Err(Error::Inadmissible(format!("grid max {max} below min {min}")));
        }
        let text = format!("{min}:{max}:{step}");
        Ok(GridSpec { min, max, step, text })
    }

    /// The default edge window `[-6, 3]`, step `0.05`.
    pub fn default_edge() -> Self {
        "-6:3:0.05".parse().expect("valid literal")
    }

    /// `(min, max)` rounded to `f64`.
    pub fn bounds_f64(&self) -> (f64, f64) {
        (self.min.to_f64().unwrap_or(f64::NAN), self.max.to_f64().unwrap_or(f64::NAN))
    }

    pub fn len(&self) -> usize {
        let span = (&self.max - &self.min) / &self.step;
        span.floor().to_usize().unwrap_or(0) + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes_rational(&self) -> Vec<BigRational> {
        (0..self.len())
            .map(|k| &self.min + &self.step * BigRational::from_integer(k.into()))
            .collect()
    }

    pub fn nodes(&self, prec: u32) -> Vec<Float> {
        self.nodes_rational()
            .iter()
            .map(|q| Float::with_val(prec, &to_rug_rational(q)))
            .collect()
    }

    pub fn nodes_f64(&self) -> Vec<f64> {
        self.nodes_rational().iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Inadmissible(format!("grid `{s}` is not min:max:step")));
        }
        let parse = |t: &str| {
            parse_decimal(t).ok_or_else(|| Error::Inadmissible(format!("bad number `{t}` in grid `{s}`")))
        };
        let mut g = GridSpec::new(parse(parts[0])?, parse(parts[1])?, parse(parts[2])?)?;
        g.text = s.trim().to_string();
        Ok(g)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
