use thiserror::Error;

/// Errors raised by the algebra, module and frame routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("invalid parameter: {0}")]
    BadParameters(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("element or operator is not positive: {0}")]
    NotPositive(String),

    #[error("matrix is not Hermitian (relative residual {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive definite (min eigenvalue {0:.3e})")]
    NotDefinite(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("commutation hypothesis violated: {what} (relative residual {residual:.3e})")]
    NotCommuting { what: String, residual: f64 },

    #[error("operator is not in GL+(H): {0}")]
    NotGlPlus(String),

    #[error("operator is not invertible: {0}")]
    NotInvertible(String),

    #[error("operator is not surjective (lower bound {0:.3e})")]
    NotSurjective(f64),

    #[error("operator has zero norm")]
    ZeroOperator,

    #[error("range inclusion fails (relative residual {residual:.3e})")]
    NotIncluded { residual: f64 },

    #[error("frame operator is singular")]
    SingularFrameOperator,

    #[error("inner-product intertwining violated on fiber {fiber} (relative residual {residual:.3e})")]
    IntertwiningViolated { fiber: usize, residual: f64 },

    #[error("precondition not verified: {0}")]
    PreconditionUnverified(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;
