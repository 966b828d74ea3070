//! Instance files and the `ainf` command line.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::{generate, run, Cli, FIELD_VAR};
pub use error::CliError;
pub use format::{emit, parse, Bundle, Document};
