//! Coefficient fields for the polynomial recurrences.
//!
//! The recurrence engine is generic over [`Coefficient`]: any `num_traits`
//! number that can be built from an exact rational and read back as one.
//! [`BigRational`] is the exact field used by default; `f64`, `f32` and the
//! fixed-precision MPFR wrapper [`Mpf`] trade exactness for speed.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_rational::BigRational;
use num_traits::{Num, NumRef, One, Zero};
use rug::Float;

use crate::mp::{from_rug_rational, to_rug_rational};

pub trait Coefficient: Num + NumRef + Clone + fmt::Debug + Send + Sync + 'static {
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;

    /// The exact value currently held.
    fn to_rug(&self) -> rug::Rational;

    fn backend_name() -> String;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(v.into()))
    }
}

impl Coefficient for BigRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_rug(&self) -> rug::Rational {
        to_rug_rational(self)
    }

    fn backend_name() -> String {
        "rational".into()
    }
}

macro_rules! impl_primitive {
    ($t:ty, $name:literal) => {
        impl Coefficient for $t {
            const EXACT: bool = false;

            fn from_rational(q: &BigRational) -> Self {
                // round to nearest; `Rational::to_f64` truncates
                let r = to_rug_rational(q);
                rug::Float::with_val(<$t>::MANTISSA_DIGITS, &r).to_f64() as $t
            }

            fn to_rug(&self) -> rug::Rational {
                rug::Rational::from_f64(*self as f64).expect("finite coefficient")
            }

            fn backend_name() -> String {
                $name.into()
            }
        }
    };
}

impl_primitive!(f64, "f64");
impl_primitive!(f32, "f32");

/// MPFR float with a precision fixed at compile time, so that `zero()` and
/// `one()` need no context.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mpf<const BITS: u32>(pub Float);

impl<const BITS: u32> Mpf<BITS> {
    pub fn new(v: impl Into<f64>) -> Self {
        Mpf(Float::with_val(BITS, v.into()))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }
}

impl<const BITS: u32> fmt::Debug for Mpf<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mpf<{BITS}>({})", self.0.to_string_radix(10, Some(20)))
    }
}

impl<const BITS: u32> fmt::Display for Mpf<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! mpf_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<const BITS: u32> $trait for Mpf<BITS> {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                Mpf(Float::with_val(BITS, &self.0 $op &rhs.0))
            }
        }
        impl<'a, const BITS: u32> $trait<&'a Mpf<BITS>> for Mpf<BITS> {
            type Output = Self;
            fn $method(self, rhs: &'a Mpf<BITS>) -> Self {
                Mpf(Float::with_val(BITS, &self.0 $op &rhs.0))
            }
        }
        impl<'a, 'b, const BITS: u32> $trait<&'b Mpf<BITS>> for &'a Mpf<BITS> {
            type Output = Mpf<BITS>;
            fn $method(self, rhs: &'b Mpf<BITS>) -> Mpf<BITS> {
                Mpf(Float::with_val(BITS, &self.0 $op &rhs.0))
            }
        }
    };
}

mpf_binop!(Add, add, +);
mpf_binop!(Sub, sub, -);
mpf_binop!(Mul, mul, *);
mpf_binop!(Div, div, /);
mpf_binop!(Rem, rem, %);

impl<const BITS: u32> Neg for Mpf<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        Mpf(-self.0)
    }
}

impl<const BITS: u32> Zero for Mpf<BITS> {
    fn zero() -> Self {
        Mpf(Float::with_val(BITS, 0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<const BITS: u32> One for Mpf<BITS> {
    fn one() -> Self {
        Mpf(Float::with_val(BITS, 1))
    }
}

impl<const BITS: u32> Num for Mpf<BITS> {
    type FromStrRadixErr = rug::float::ParseFloatError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let parsed = Float::parse_radix(s, radix as i32)?;
        Ok(Mpf(Float::with_val(BITS, parsed)))
    }
}

impl<const BITS: u32> Coefficient for Mpf<BITS> {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        Mpf(Float::with_val(BITS, &to_rug_rational(q)))
    }

    fn to_rug(&self) -> rug::Rational {
        self.0.to_rational().expect("finite coefficient")
    }

    fn backend_name() -> String {
        format!("bigfloat{BITS}")
    }
}

/// Exact rational view of any coefficient, in `num` form.
pub fn to_big_rational<T: Coefficient>(c: &T) -> BigRational {
    from_rug_rational(&c.to_rug())
}
