use thiserror::Error;

/// Errors raised by the operator and transform layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Fock cutoff {dim}: need at least {min}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Fock index {index} out of range for cutoff {dim}")]
    OutOfRange { index: usize, dim: usize },

    #[error("singular frame: (mu, nu) = (0, 0)")]
    SingularFrame,

    #[error("label {label} is not accepted by the {scheme} scheme")]
    LabelMismatch { label: String, scheme: &'static str },

    #[error("symbol grids do not share labels and weights")]
    GridMismatch,

    #[error("not a density operator: {0}")]
    InvalidState(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
