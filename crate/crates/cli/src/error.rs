use ainf_core::coalgebra::CheckReport;
use thiserror::Error;

use crate::format::Kind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{at}: undefined {kind} {name:?}")]
    Undefined { kind: Kind, name: String, at: String },
    #[error("{at}: {message}")]
    Invalid { at: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{context}")]
    Failed {
        context: String,
        report: Option<Box<CheckReport>>,
    },
}

impl CliError {
    /// 1 for mathematical failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed { .. } => 1,
            _ => 2,
        }
    }
}

/// Verification failures and unsolvable systems become exit code 1;
/// everything else is treated as bad input.
pub fn from_core(context: &str, err: ainf_core::Error) -> CliError {
    match err {
        ainf_core::Error::Verification { context: inner, report } => CliError::Failed {
            context: format!("{context}: {inner}"),
            report: Some(report),
        },
        ainf_core::Error::Unsolvable(msg) => CliError::Failed {
            context: format!("{context}: {msg}"),
            report: None,
        },
        other => CliError::Invalid {
            at: context.to_string(),
            message: other.to_string(),
        },
    }
}
