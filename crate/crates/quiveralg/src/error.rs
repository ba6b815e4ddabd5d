use thiserror::Error;

/// Crate-wide error type. CLI maps `Parse`/`Semantic`/`Io` to exit code 2,
/// everything else to a diagnostic on stderr.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },

    /// A domain-type invariant was violated on construction.
    #[error("{0}")]
    Invalid(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),

    /// An operation required a class membership the input does not have.
    #[error("presentation is not {class}: {details}")]
    NotInClass { class: String, details: String },

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("representation violates relation {index}: {relation}")]
    InvalidRepresentation { index: usize, relation: String },

    #[error("no valid skewed-gentle envelope: {0}")]
    EnvelopeNotFound(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("matrix is not idempotent")]
    NotIdempotent,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
