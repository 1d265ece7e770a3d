use thiserror::Error;

/// Errors raised by element construction and the group operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix size {0} is not of the form 2n+2 with n >= 1")]
    BadSize(usize),
    #[error("sign must be exactly +1 or -1, got {0}")]
    InvalidSign(f64),
    #[error("matrix is not orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },
    #[error("matrix is not symplectic (residual {residual:e})")]
    NotSymplectic { residual: f64 },
    #[error("block structure violated: {what} (deviation {deviation:e})")]
    Structure { what: &'static str, deviation: f64 },
    #[error("matrix is singular (|det| = {det:e})")]
    Singular { det: f64 },
    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown {what} '{name}' (expected one of: {options})")]
    Unknown {
        what: &'static str,
        name: String,
        options: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, GroupError>;
