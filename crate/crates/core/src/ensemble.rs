//! Which ensemble, which beta, how many particles.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleKind {
    Gaussian,
    LaguerreFixed,
    LaguerreProportional,
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnsembleKind::Gaussian => "gaussian",
            EnsembleKind::LaguerreFixed => "laguerre-fixed",
            EnsembleKind::LaguerreProportional => "laguerre-proportional",
        })
    }
}

/// Weight family with its parameter.
///
/// Gaussian weight `exp(-beta x^2 / 2)`; Laguerre weight
/// `x^(beta a / 2) exp(-beta x / 2)` on `x > 0`, with `a` either fixed or
/// `alpha_ratio * N` for matrix size `N`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Gaussian,
    LaguerreFixed { a: BigRational },
    LaguerreProportional { alpha_ratio: BigRational },
}

impl Family {
    pub fn kind(&self) -> EnsembleKind {
        match self {
            Family::Gaussian => EnsembleKind::Gaussian,
            Family::LaguerreFixed { .. } => EnsembleKind::LaguerreFixed,
            Family::LaguerreProportional { .. } => EnsembleKind::LaguerreProportional,
        }
    }

    pub fn is_laguerre(&self) -> bool {
        !matches!(self, Family::Gaussian)
    }

    /// Laguerre exponent `a` for an ensemble of `matrix_size` eigenvalues.
    pub fn laguerre_a(&self, matrix_size: usize) -> Option<BigRational> {
        match self {
            Family::Gaussian => None,
            Family::LaguerreFixed { a } => Some(a.clone()),
            Family::LaguerreProportional { alpha_ratio } => {
                Some(alpha_ratio * BigRational::from_integer(matrix_size.into()))
            }
        }
    }
}

/// An ensemble family at a given beta, before the matrix size is chosen.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub family: Family,
    pub beta: u32,
}

impl Ensemble {
    pub fn new(family: Family, beta: u32) -> Result<Self> {
        check_beta(beta)?;
        match &family {
            Family::Gaussian => {}
            Family::LaguerreFixed { a } => check_laguerre_a(a, beta)?,
            Family::LaguerreProportional { alpha_ratio } => {
                if !alpha_ratio.is_positive() {
                    return Err(Error::Inadmissible(format!(
                        "alpha_ratio must be > 0, got {alpha_ratio}"
                    )));
                }
            }
        }
        Ok(Ensemble { family, beta })
    }

    pub fn gaussian(beta: u32) -> Result<Self> {
        Self::new(Family::Gaussian, beta)
    }

    pub fn laguerre_fixed(beta: u32, a: BigRational) -> Result<Self> {
        Self::new(Family::LaguerreFixed { a }, beta)
    }

    pub fn laguerre_proportional(beta: u32, alpha_ratio: BigRational) -> Result<Self> {
        Self::new(Family::LaguerreProportional { alpha_ratio }, beta)
    }

    /// The average behind the density of an `n`-eigenvalue matrix runs
    /// over `n - 1` particles.
    pub fn spec_for_density(&self, n: usize) -> Result<EnsembleSpec> {
        if n == 0 {
            return Err(Error::Inadmissible("matrix size must be >= 1".into()));
        }
        EnsembleSpec::new(self.family.clone(), self.beta, n - 1)
    }
}

/// Input to the recurrence engine.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    family: Family,
    beta: u32,
    n_particles: usize,
}

impl EnsembleSpec {
    pub fn new(family: Family, beta: u32, n_particles: usize) -> Result<Self> {
        let ens = Ensemble::new(family, beta)?;
        let spec = EnsembleSpec { family: ens.family, beta, n_particles };
        if let Some(a) = spec.laguerre_a() {
            check_laguerre_a(&a, beta)?;
        }
        Ok(spec)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn kind(&self) -> EnsembleKind {
        self.family.kind()
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// `beta / 2`, always an integer here.
    pub fn lambda(&self) -> u32 {
        self.beta / 2
    }

    /// Laguerre exponent. In the proportional case `a = alpha_ratio * N`
    /// where `N = n_particles + 1` is the matrix size of the density.
    pub fn laguerre_a(&self) -> Option<BigRational> {
        self.family.laguerre_a(self.n_particles + 1)
    }
}

fn check_beta(beta: u32) -> Result<()> {
    if beta == 0 || beta % 2 != 0 {
        return Err(Error::Inadmissible(format!(
            "beta must be a positive even integer, got {beta}"
        )));
    }
    Ok(())
}

/// Integrability of `x^(beta a / 2)` at the origin: `a > -2 / beta`.
fn check_laguerre_a(a: &BigRational, beta: u32) -> Result<()> {
    let bound = BigRational::new((-2).into(), beta.into());
    if *a <= bound {
        return Err(Error::Inadmissible(format!(
            "Laguerre exponent a = {a} must exceed -2/beta = {bound}"
        )));
    }
    Ok(())
}
