//! Differential-difference recurrences for the auxiliary Selberg-type
//! integrals `I_p(x)`.
//!
//! For `n` particles with weight `w`, exponent `alpha` and coupling `lambda`,
//!
//! ```text
//! I_p(x) = p!(n-p)!/n! * Int prod_l w(t_l) (x - t_l)^(alpha-1)
//!          * prod_{j<k} |t_k - t_j|^(2 lambda) * e_p(x - t_1, ..., x - t_n) dt
//! ```
//!
//! At `alpha = 1, p = 0` this is the (x-independent) partition function.
//! Stepping `p -> p + 1` up to `p = n` and using `I_n(alpha) = I_0(alpha + 1)`
//! walks the exponent up one unit at a time; after the stage `alpha = beta`
//! the result is `Int prod w(t_l) (x - t_l)^beta |Delta|^beta`, a polynomial
//! of degree `beta * n`.
//!
//! The partition function is factored out: every run starts from the
//! constant 1, so the final polynomial is the normalized average
//! `< prod_l (x - t_l)^beta >`.

use num_rational::BigRational;
use num_traits::Zero;

use crate::ensemble::{EnsembleSpec, Family};
use crate::error::{Error, Result};
use crate::poly::BigPoly;
use crate::scalar::Coefficient;

/// Position in the two-index sweep, holding the sliding window
/// `(I_{p-1}, I_p)`.
#[derive(Clone, Debug)]
pub struct RecurrenceCursor<T: Coefficient> {
    alpha_index: u32,
    p: usize,
    prev: BigPoly<T>,
    curr: BigPoly<T>,
}

impl<T: Coefficient> RecurrenceCursor<T> {
    /// Start of the first stage: `alpha = 1`, `p = 0`, `I_0 = 1`.
    pub fn start() -> Self {
        Self::at_stage_start(1, BigPoly::one())
    }

    pub fn at_stage_start(alpha_index: u32, i0: BigPoly<T>) -> Self {
        RecurrenceCursor { alpha_index, p: 0, prev: BigPoly::zero(), curr: i0 }
    }

    /// Cursor at an arbitrary interior position; used by tests that start
    /// from hand-computed polynomials.
    pub fn at(alpha_index: u32, p: usize, prev: BigPoly<T>, curr: BigPoly<T>) -> Self {
        RecurrenceCursor { alpha_index, p, prev, curr }
    }

    pub fn alpha_index(&self) -> u32 {
        self.alpha_index
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn prev(&self) -> &BigPoly<T> {
        &self.prev
    }

    pub fn curr(&self) -> &BigPoly<T> {
        &self.curr
    }

    pub fn into_curr(self) -> BigPoly<T> {
        self.curr
    }

    /// Shift the window after a step has produced `I_{p+1}`.
    pub fn advance(&mut self, next: BigPoly<T>) {
        self.prev = std::mem::replace(&mut self.curr, next);
        self.p += 1;
    }

    /// `I_0(alpha + 1) <- I_n(alpha)`.
    pub fn next_stage(&mut self) {
        self.alpha_index += 1;
        self.p = 0;
        self.prev = BigPoly::zero();
    }
}

/// Parameters of the Jacobi weight `t^lambda1 (1 - t)^lambda2` on `(0, 1)`.
#[derive(Clone, Debug)]
pub struct JacobiParams<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub lambda: T,
    pub alpha: T,
}

/// `(A_p, B_p, D_p, E_p)` of the Jacobi differential-difference equation.
pub fn jacobi_coefficients<T: Coefficient>(params: &JacobiParams<T>, n: usize, p: usize) -> [T; 4] {
    let JacobiParams { lambda1, lambda2, lambda, alpha } = params;
    let n_t = T::from_i64(n as i64);
    let p_t = T::from_i64(p as i64);
    let one = T::one();
    let two = T::from_i64(2);
    let nmp = n_t.clone() - &p_t;
    let nmp1 = nmp.clone() - &one;

    let a = nmp.clone()
        * (lambda1.clone() + lambda2 + two.clone() * lambda * &nmp1 + two.clone() * alpha);
    let b = (p_t.clone() - &n_t) * (lambda1.clone() + alpha + lambda.clone() * &nmp1);
    let d = p_t.clone() * (lambda.clone() * &nmp + alpha);
    let e = lambda1.clone()
        + lambda2
        + &one
        + lambda.clone() * (two * &n_t - &p_t - T::from_i64(2))
        + alpha;
    [a, b, d, e]
}

fn check_stage(p: usize, n: usize) -> Result<()> {
    if p >= n {
        return Err(Error::StageOverflow { p, n });
    }
    Ok(())
}

/// One step of the Jacobi recurrence:
///
/// `(n-p) E_p I_{p+1} = (A_p x + B_p) I_p - x(x-1) I_p' + D_p x(x-1) I_{p-1}`.
pub fn jacobi_dde_step<T: Coefficient>(
    cursor: &RecurrenceCursor<T>,
    params: &JacobiParams<T>,
    n: usize,
) -> Result<BigPoly<T>> {
    let p = cursor.p;
    check_stage(p, n)?;
    let [a, b, d, e] = jacobi_coefficients(params, n, p);
    let pivot = T::from_i64((n - p) as i64) * e;
    if pivot.is_zero() {
        return Err(Error::ZeroPivot { p });
    }
    // x(x - 1) = -x + x^2
    let xx1 = BigPoly::from_coeffs(vec![T::zero(), T::zero() - T::one(), T::one()]);
    let ip = &cursor.curr;
    let lin = BigPoly::from_coeffs(vec![b, a]);
    let mut rhs = lin.mul(ip).sub(&xx1.mul(&ip.derivative()));
    if !d.is_zero() {
        rhs = rhs.add(&xx1.mul(&cursor.prev).scale(&d));
    }
    Ok(rhs.scale(&(T::one() / pivot)))
}

/// One step of the Gaussian-limit recurrence:
///
/// `lambda(n-p) G_{p+1} = lambda(n-p) x G_p + G_p'/2 - p(lambda(n-p) + alpha)/2 G_{p-1}`.
pub fn gaussian_step<T: Coefficient>(
    cursor: &RecurrenceCursor<T>,
    lambda: &T,
    alpha: &T,
    n: usize,
) -> Result<BigPoly<T>> {
    let p = cursor.p;
    check_stage(p, n)?;
    let lnp = lambda.clone() * T::from_i64((n - p) as i64);
    if lnp.is_zero() {
        return Err(Error::ZeroPivot { p });
    }
    let half = T::one() / T::from_i64(2);
    let gp = &cursor.curr;
    let mut rhs = gp.mul_x().scale(&lnp).add(&gp.derivative().scale(&half));
    if p > 0 {
        let dp = T::from_i64(p as i64) * (lnp.clone() + alpha) * &half;
        rhs = rhs.sub(&cursor.prev.scale(&dp));
    }
    Ok(rhs.scale(&(T::one() / lnp)))
}

/// One step of the Laguerre-limit recurrence:
///
/// `lambda(n-p) L_{p+1} = (lambda(n-p) x + B_p) L_p + x L_p' - D_p x L_{p-1}`.
pub fn laguerre_step<T: Coefficient>(
    cursor: &RecurrenceCursor<T>,
    lambda: &T,
    lambda1: &T,
    alpha: &T,
    n: usize,
) -> Result<BigPoly<T>> {
    let p = cursor.p;
    check_stage(p, n)?;
    let n_t = T::from_i64(n as i64);
    let p_t = T::from_i64(p as i64);
    let lnp = lambda.clone() * (n_t.clone() - &p_t);
    if lnp.is_zero() {
        return Err(Error::ZeroPivot { p });
    }
    let b = (p_t.clone() - &n_t)
        * (lambda1.clone() + alpha + lambda.clone() * (n_t - &p_t - T::one()));
    let d = p_t * (lnp.clone() + alpha);
    let lp = &cursor.curr;
    let lin = BigPoly::from_coeffs(vec![b, lnp.clone()]);
    let mut rhs = lin.mul(lp).add(&lp.derivative().mul_x());
    if !d.is_zero() {
        rhs = rhs.sub(&cursor.prev.mul_x().scale(&d));
    }
    Ok(rhs.scale(&(T::one() / lnp)))
}

/// Sweep `stages` exponent stages of `n` steps each, starting from `I_0 = 1`
/// at `alpha = 1`. `step` receives the cursor and the current exponent.
pub fn run_stages<T, S, P>(n: usize, stages: u32, mut step: S, mut progress: P) -> Result<BigPoly<T>>
where
    T: Coefficient,
    S: FnMut(&RecurrenceCursor<T>, &T) -> Result<BigPoly<T>>,
    P: FnMut(u32, usize),
{
    let mut cursor = RecurrenceCursor::start();
    if n == 0 {
        return Ok(cursor.into_curr());
    }
    for stage in 1..=stages {
        let alpha = T::from_i64(stage as i64);
        for _ in 0..n {
            progress(stage, cursor.p);
            let next = step(&cursor, &alpha)?;
            cursor.advance(next);
        }
        if stage < stages {
            cursor.next_stage();
        }
    }
    Ok(cursor.into_curr())
}

/// The normalized average `< prod_l (x - t_l)^beta >` over `n_particles`
/// particles, as an exact polynomial of degree `beta * n_particles`.
pub fn run_full_recurrence<T: Coefficient>(spec: &EnsembleSpec) -> Result<BigPoly<T>> {
    run_full_recurrence_with_progress(spec, |_, _| {})
}

pub fn run_full_recurrence_with_progress<T, P>(spec: &EnsembleSpec, progress: P) -> Result<BigPoly<T>>
where
    T: Coefficient,
    P: FnMut(u32, usize),
{
    let n = spec.n_particles();
    let lambda = T::from_i64(spec.lambda() as i64);
    let stages = spec.beta();
    match spec.family() {
        Family::Gaussian => {
            run_stages(n, stages, |c, alpha| gaussian_step(c, &lambda, alpha, n), progress)
        }
        Family::LaguerreFixed { .. } | Family::LaguerreProportional { .. } => {
            let a = spec.laguerre_a().expect("Laguerre family has an exponent");
            let lambda1_q = a * BigRational::from_integer(spec.lambda().into());
            let lambda1 = T::from_rational(&lambda1_q);
            run_stages(
                n,
                stages,
                |c, alpha| laguerre_step(c, &lambda, &lambda1, alpha, n),
                progress,
            )
        }
    }
}

/// Elementary symmetric polynomial `e_p(values)`.
pub fn elementary_symmetric(values: &[BigRational], p: usize) -> Result<BigRational> {
    if p > values.len() {
        return Err(Error::IndexOutOfRange { index: p, len: values.len() });
    }
    // Coefficients of prod_j (1 + z t_j), built one factor at a time.
    let mut e = vec![BigRational::zero(); p + 1];
    e[0] = BigRational::from_integer(1.into());
    for (count, t) in values.iter().enumerate() {
        for k in (1..=p.min(count + 1)).rev() {
            let add = e[k - 1].clone() * t;
            e[k] += add;
        }
    }
    Ok(e.swap_remove(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::Ensemble;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    fn poly(c: &[Q]) -> BigPoly<Q> {
        BigPoly::from_coeffs(c.to_vec())
    }

    #[test]
    fn jacobi_single_particle_first_step() {
        let params = JacobiParams { lambda1: q(0, 1), lambda2: q(0, 1), lambda: q(1, 2), alpha: q(1, 1) };
        let [a, b, d, e] = jacobi_coefficients(&params, 1, 0);
        assert_eq!((a, b, d, e), (q(2, 1), q(-1, 1), q(0, 1), q(2, 1)));
        let cursor = RecurrenceCursor::start();
        let i1 = jacobi_dde_step(&cursor, &params, 1).unwrap();
        // Int_0^1 (x - t) dt
        assert_eq!(i1, poly(&[q(-1, 2), q(1, 1)]));
    }

    #[test]
    fn step_past_last_particle_overflows() {
        let params = JacobiParams { lambda1: q(0, 1), lambda2: q(0, 1), lambda: q(1, 2), alpha: q(1, 1) };
        let cursor = RecurrenceCursor::at(1, 1, BigPoly::one(), BigPoly::one());
        assert_eq!(jacobi_dde_step(&cursor, &params, 1), Err(Error::StageOverflow { p: 1, n: 1 }));
        assert!(matches!(gaussian_step(&cursor, &q(1, 1), &q(1, 1), 1), Err(Error::StageOverflow { .. })));
    }

    #[test]
    fn zero_pivot_detected() {
        // E_0 = lambda1 + lambda2 + 1 + lambda(2N - 2) + alpha = 0
        let params = JacobiParams { lambda1: q(-2, 1), lambda2: q(0, 1), lambda: q(0, 1), alpha: q(1, 1) };
        let cursor = RecurrenceCursor::start();
        assert_eq!(jacobi_dde_step(&cursor, &params, 1), Err(Error::ZeroPivot { p: 0 }));
        assert_eq!(gaussian_step(&cursor, &q(0, 1), &q(1, 1), 1), Err(Error::ZeroPivot { p: 0 }));
    }

    #[test]
    fn gaussian_steps_for_one_particle() {
        let lambda = q(1, 1);
        // G_0 = c held as 1: G_1 = x
        let g1 = gaussian_step(&RecurrenceCursor::start(), &lambda, &q(1, 1), 1).unwrap();
        assert_eq!(g1, poly(&[q(0, 1), q(1, 1)]));
        // continuation to alpha = 2: G_1 = x^2 + 1/2
        let c = RecurrenceCursor::at_stage_start(2, g1);
        let g1 = gaussian_step(&c, &lambda, &q(2, 1), 1).unwrap();
        assert_eq!(g1, poly(&[q(1, 2), q(0, 1), q(1, 1)]));
    }

    #[test]
    fn gaussian_first_step_ignores_previous() {
        // p = 0: G_1 = x G_0 + G_0'/(2 lambda N), whatever the window holds.
        let lambda = q(2, 1);
        let g0 = poly(&[q(1, 1), q(3, 1), q(5, 1)]);
        let junk = poly(&[q(99, 1)]);
        let c = RecurrenceCursor::at(1, 0, junk, g0.clone());
        let got = gaussian_step(&c, &lambda, &q(1, 1), 3).unwrap();
        let want = g0.mul_x().add(&g0.derivative().scale(&q(1, 12)));
        assert_eq!(got, want);
    }

    #[test]
    fn laguerre_steps_for_one_particle() {
        let lambda = q(1, 1);
        let lambda1 = q(0, 1);
        let l1 = laguerre_step(&RecurrenceCursor::start(), &lambda, &lambda1, &q(1, 1), 1).unwrap();
        assert_eq!(l1, poly(&[q(-1, 1), q(1, 1)]));
        let c = RecurrenceCursor::at_stage_start(2, l1);
        let l1 = laguerre_step(&c, &lambda, &lambda1, &q(2, 1), 1).unwrap();
        assert_eq!(l1, poly(&[q(2, 1), q(-2, 1), q(1, 1)]));
    }

    #[test]
    fn full_recurrence_small_cases() {
        let g = Ensemble::gaussian(2).unwrap().spec_for_density(2).unwrap();
        assert_eq!(run_full_recurrence::<Q>(&g).unwrap(), poly(&[q(1, 2), q(0, 1), q(1, 1)]));

        let l = Ensemble::laguerre_fixed(2, q(0, 1)).unwrap().spec_for_density(2).unwrap();
        assert_eq!(run_full_recurrence::<Q>(&l).unwrap(), poly(&[q(2, 1), q(-2, 1), q(1, 1)]));

        for ens in [Ensemble::gaussian(6).unwrap(), Ensemble::laguerre_fixed(4, q(1, 2)).unwrap()] {
            let spec = ens.spec_for_density(1).unwrap();
            assert_eq!(run_full_recurrence::<Q>(&spec).unwrap(), BigPoly::one());
        }
    }

    #[test]
    fn progress_reports_every_step() {
        let spec = Ensemble::gaussian(4).unwrap().spec_for_density(4).unwrap();
        let mut seen = Vec::new();
        run_full_recurrence_with_progress::<Q, _>(&spec, |a, p| seen.push((a, p))).unwrap();
        assert_eq!(seen.len(), 4 * 3);
        assert_eq!(seen.first(), Some(&(1, 0)));
        assert_eq!(seen.last(), Some(&(4, 2)));
    }

    #[test]
    fn elementary_symmetric_values() {
        let v = [q(1, 1), q(2, 1), q(3, 1)];
        assert_eq!(elementary_symmetric(&v, 0).unwrap(), q(1, 1));
        assert_eq!(elementary_symmetric(&[], 0).unwrap(), q(1, 1));
        assert_eq!(elementary_symmetric(&v, 2).unwrap(), q(11, 1));
        assert_eq!(elementary_symmetric(&v, 3).unwrap(), q(6, 1));
        assert_eq!(
            elementary_symmetric(&v, 4),
            Err(Error::IndexOutOfRange { index: 4, len: 3 })
        );
    }
}
