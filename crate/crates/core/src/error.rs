use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("invalid pair: {}", .0.join("; "))]
    InvalidPair(Vec<String>),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
