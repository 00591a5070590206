use thiserror::Error;

/// Errors surfaced by the exact engines and the numerical verifiers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series has zero constant term, not invertible")]
    ZeroConstantTerm,
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no unique dominance-maximal term to normalize by")]
    NoUniqueLeading,
    #[error("input is not symmetric: exact division by z_{0} - z_{1} left a remainder")]
    NonSymmetricInput(usize, usize),
    #[error("degenerate recursion: equal diagonal coefficients for {0:?} and {1:?}")]
    DegenerateRecursion(Vec<i64>, Vec<i64>),
    #[error("degenerate spectrum: zero energy denominator at {0:?}")]
    DegenerateSpectrum(Vec<i64>),
    #[error("degenerate denominator: leading coefficient vanishes at {0:?}")]
    DegenerateDenominator(Vec<i64>),
    #[error("energy difference is not positive (base may not be a partition)")]
    NonPositiveDiff,
    #[error("gap condition violated: expansion point at distance {0} from the spectrum")]
    GapViolation(String),
    #[error("contour violation: need 0 < eps < {0}, got {1}")]
    ContourViolation(f64, f64),
    #[error("quadrature did not converge: refinement changed the result by {0:e}")]
    NonConvergence(f64),
    #[error("eigenfunction mismatch beyond normalization for n = {0:?}")]
    MismatchBeyondNormalization(Vec<i64>),
    #[error("residual Laurent support after assembly for partition {0:?}")]
    ResidualLaurentSupport(Vec<i64>),
    #[error("coincident sample points")]
    CoincidentPoints,
    #[error("evaluation at a singular point")]
    SingularPoint,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
