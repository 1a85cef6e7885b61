use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("stage dimension {dim} exceeds cap {cap}")]
    StageCap { dim: String, cap: usize },

    #[error("stage mismatch: {0}")]
    StageMismatch(String),

    #[error("not unitary: {0}")]
    NotUnitary(String),

    #[error("not a projection: {0}")]
    NotProjection(String),

    #[error("not a bijection: {0}")]
    NotBijection(String),

    #[error("relation `{relation}` does not hold")]
    RelationViolation { relation: String },

    #[error("inconsistent cocycle: {0}")]
    InconsistentCocycle(String),

    #[error("invalid group element: {0}")]
    InvalidElement(String),

    #[error("word outside the modeled group: {0}")]
    UnmodeledWord(String),

    #[error("certificate failure: {0}")]
    CertificateFailure(String),

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
