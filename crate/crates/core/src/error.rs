use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("inconsistent topology: {0}")]
    InconsistentTopology(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("schema violation at `{path}`: {reason}")]
    SchemaViolation { path: String, reason: String },

    #[error("residue {residue} has no CA atom")]
    MissingCAlpha { residue: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("measure mismatch: {left} vs {right}")]
    MeasureMismatch { left: String, right: String },

    #[error("points {i} and {j} coincide")]
    CoincidentPoints { i: usize, j: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
