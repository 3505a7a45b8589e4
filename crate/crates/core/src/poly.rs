//! Dense univariate polynomials over a [`Coefficient`] field.

use std::fmt;

use crate::scalar::Coefficient;

/// Dense polynomial, `coeffs[k]` multiplying `x^k`.
///
/// The coefficient vector is kept trimmed: the last entry is nonzero unless
/// the polynomial is identically zero, in which case the vector is empty.
#[derive(Clone, PartialEq)]
pub struct BigPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> BigPoly<T> {
    pub fn zero() -> Self {
        BigPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = BigPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.clone() + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(T::zero() - T::one())))
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        BigPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a.clone() * T::from_i64(k as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// Horner evaluation in the coefficient field.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x + c)
    }

    /// `p(a + b x)` as a polynomial in `x`.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        let lin = Self::from_coeffs(vec![a.clone(), b.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }

    /// Divide through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = T::one() / l;
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Exact coefficients as `numerator/denominator` strings, one per line,
    /// lowest power first.
    pub fn dump_exact(&self) -> String {
        let mut s = String::new();
        for c in &self.coeffs {
            let q = c.to_rug();
            s.push_str(&format!("{}/{}\n", q.numer(), q.denom()));
        }
        s
    }
}

impl<T: Coefficient> fmt::Debug for BigPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn p(c: &[(i64, i64)]) -> BigPoly<BigRational> {
        BigPoly::from_coeffs(c.iter().map(|&(a, b)| q(a, b)).collect())
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let z = p(&[(0, 1), (0, 1)]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(p(&[(3, 1)]).sub(&p(&[(3, 1)])), BigPoly::zero());
    }

    #[test]
    fn derivative_and_mul_x() {
        // 1 + 2x + 3x^2
        let a = p(&[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(a.derivative(), p(&[(2, 1), (6, 1)]));
        assert_eq!(a.mul_x(), p(&[(0, 1), (1, 1), (2, 1), (3, 1)]));
        assert_eq!(a.eval(&q(1, 2)), q(1, 1) + q(1, 1) + q(3, 4));
    }

    #[test]
    fn affine_composition() {
        // (x - 1)^2 at x = 2 + 3y  ->  (1 + 3y)^2
        let a = p(&[(1, 1), (-2, 1), (1, 1)]);
        let c = a.compose_affine(&q(2, 1), &q(3, 1));
        assert_eq!(c, p(&[(1, 1), (6, 1), (9, 1)]));
        assert_eq!(c.monic(), p(&[(1, 9), (2, 3), (1, 1)]));
    }

    #[test]
    fn exact_dump_format() {
        let a = p(&[(-1, 2), (1, 1)]);
        assert_eq!(a.dump_exact(), "-1/2\n1/1\n");
    }
}
