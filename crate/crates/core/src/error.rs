use thiserror::Error;

use crate::coalgebra::CheckReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid graded space: {0}")]
    InvalidSpace(String),
    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree violation: {0}")]
    Degree(String),
    #[error("arity {arity} out of range 1..={max}")]
    ArityOutOfRange { arity: usize, max: usize },
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("linear system has no solution: {0}")]
    Unsolvable(String),
    #[error("verification failed ({context}): {report}")]
    Verification { context: String, report: Box<CheckReport> },
}

impl Error {
    pub(crate) fn verification(context: impl Into<String>, report: CheckReport) -> Error {
        Error::Verification {
            context: context.into(),
            report: Box::new(report),
        }
    }

    /// The failing report, if this is a verification error.
    pub fn report(&self) -> Option<&CheckReport> {
        match self {
            Error::Verification { report, .. } => Some(report),
            _ => None,
        }
    }
}
