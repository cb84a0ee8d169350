//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A gate parameter is not a finite number.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Qubit indices out of range, duplicated, or not coupled.
    #[error("topology error: {0}")]
    Topology(String),

    /// Operation requires the other state representation (pure vs mixed).
    #[error("representation error: {0}")]
    Representation(String),

    /// Feature binding failed (index out of range, dimension mismatch).
    #[error("binding error: {0}")]
    Binding(String),

    /// Input vector cannot be normalized.
    #[error("normalization error: {0}")]
    Normalization(String),

    /// Text input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input is structurally valid but degenerate (e.g. single-class labels).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Matrix or vector dimensions do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
