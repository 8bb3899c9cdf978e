use thiserror::Error;

use crate::system::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("malformed defining system: {0}")]
    Shape(String),

    #[error("invalid defining system:\n{0}")]
    Invalid(ValidationReport),

    #[error("{0} is outside the domain of {1}")]
    Domain(String, &'static str),

    #[error("index {index} is not admissible: {reason}")]
    Inadmissible { index: String, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown index syntax {0:?} (expected x:i:j or z:i:j)")]
    IndexSyntax(String),

    #[error("relation {relation} does not vanish on the string module")]
    RelationViolated { relation: String },

    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("ancestry scheduler stuck: {0}")]
    Unreachable(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
