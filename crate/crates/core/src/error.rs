use thiserror::Error;

use crate::state::ValidationReport;

#[derive(Debug, Error)]
pub enum QError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("joint dimension {dim} exceeds the cap of {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(ValidationReport),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid subsystem label `{0}`")]
    InvalidSubsystem(String),

    #[error("preparation outcome has zero probability ({0:e})")]
    ZeroProbability(f64),

    #[error("probe set is not tomographically complete")]
    SingularProbeSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, QError>;
