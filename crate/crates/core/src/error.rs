use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("numerical blow-up in neuron {neuron} at t = {t} ms")]
    NumericalBlowup { neuron: usize, t: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("irregular bursts: {0}")]
    IrregularBursts(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no primary neuron: {0}")]
    NoPrimary(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
