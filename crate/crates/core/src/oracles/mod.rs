//! Ground truth independent of the recurrence: Airy functions, the beta = 2
//! limit and correction functions, the Christoffel–Darboux density and
//! brute-force quadrature.

pub mod airy;
pub mod cd;
pub mod limits;
pub mod quadrature;

pub use airy::{airy, airy_prec, AiryPair};
pub use cd::cd_density;
pub use limits::{rho_correction_beta2, rho_limit_beta2, CorrectionCase};
pub use quadrature::quadrature_oracle;
