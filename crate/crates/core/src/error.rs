use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map one-to-one onto the failure modes of the individual
/// operations; the CLI turns them into exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("zero pivot (N - p) * E_p at step p = {p}")]
    ZeroPivot { p: usize },

    #[error("recurrence stage overflow: p = {p} but only {n} particles")]
    StageOverflow { p: usize, n: usize },

    #[error("index {index} out of range for {len} values")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("gamma function pole: argument {0} is a non-positive integer")]
    PoleHit(String),

    #[error("polynomial average is non-positive ({value}) at x = {x}")]
    NegativePolyValue { x: String, value: String },

    #[error("x = {0} lies outside the weight's support")]
    OutOfSupport(String),

    #[error("argument {0} outside the supported range")]
    RangeExceeded(String),

    #[error("shift constant k# is zero for this case; the derivative diagnostic is undefined")]
    ZeroK,

    #[error("only beta = 2 is supported here (got beta = {0})")]
    BetaUnsupported(u32),

    #[error("quadrature oracle limited to n_particles <= 3 (got {0})")]
    TooLarge(usize),

    #[error("grids differ between the two tables")]
    GridMismatch,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("no samples fell inside the histogram window")]
    EmptyWindow,

    #[error("quadrature did not settle within {0} nodes per dimension")]
    QuadratureNoConvergence(usize),

    #[error("tridiagonal eigensolver did not converge")]
    EigensolverNoConvergence,

    #[error("random number generation failed: {0}")]
    RngFailure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
