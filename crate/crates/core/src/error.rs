use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite entry in input")]
    NonFinite,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("factor mismatch: {left} vs {right}")]
    FactorMismatch { left: String, right: String },

    #[error("invalid factor descriptor: {0}")]
    InvalidFactor(String),

    #[error("element does not belong to {factor}: {reason}")]
    NotInFactor { factor: String, reason: String },

    #[error("matrix is not hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("element is not a tripotent (residual {0:.3e})")]
    NotTripotent(f64),

    #[error("tripotent is not minimal (Peirce-2 dimension {0})")]
    NotMinimal(usize),

    #[error("L(e,e) eigenvalue {0:.6} is not within tolerance of 0, 1/2 or 1")]
    PeirceInconsistency(f64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("map is not invertible: {0}")]
    NotInvertible(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
