//! Finite-N soft-edge densities of even-beta Gaussian and Laguerre
//! ensembles, computed exactly from a differential-difference recurrence,
//! together with their scaling, the leading correction terms, independent
//! reference values and a Monte Carlo cross-check.

pub mod convergence;
pub mod ensemble;
pub mod error;
pub mod grid;
pub mod mc;
pub mod mp;
pub mod normalization;
pub mod oracles;
pub mod poly;
pub mod recurrence;
pub mod scalar;
pub mod scaling;
pub mod table;
pub mod tridiag;

pub use convergence::{CorrectionSeries, DerivCheck, RateFit};
pub use ensemble::{Ensemble, EnsembleKind, EnsembleSpec, Family};
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use normalization::{density, FiniteDensity, LogConstant};
pub use poly::BigPoly;
pub use recurrence::{run_full_recurrence, run_full_recurrence_with_progress};
pub use scalar::{Coefficient, Mpf};
pub use scaling::{scaled_density, Centring, ScalingCase, ScalingMap};
pub use table::DensityTable;

/// Exact rational coefficient field.
pub type Rational = num_rational::BigRational;
/// Polynomial with exact rational coefficients.
pub type ExactPoly = BigPoly<Rational>;
/// Polynomial in double precision.
pub type F64Poly = BigPoly<f64>;
/// Polynomial in single precision.
pub type F32Poly = BigPoly<f32>;
/// 512-bit binary floating point coefficients.
pub type Mpf512 = Mpf<512>;
