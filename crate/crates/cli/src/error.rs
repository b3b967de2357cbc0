use std::path::Path;

use cmc_darboux_core::Error;
use serde_json::json;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    Config = 2,
    Numeric = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(#[source] Error),
    #[error("numeric failure: {0}")]
    Numeric(#[source] Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Config(_) | CliError::Input(_) | CliError::Io { .. } => ExitStatus::Config,
            CliError::Numeric(_) | CliError::Validation(_) => ExitStatus::Numeric,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Input(_) => "input",
            CliError::Numeric(_) => "numeric",
            CliError::Validation(_) => "validation",
            CliError::Io { .. } => "io",
        }
    }

    /// Machine-readable form written to stderr and `error.json`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "status": "error",
            "exit_code": self.status() as i32,
            "kind": self.kind(),
            "message": self.to_string(),
        })
    }
}

impl From<Error> for CliError {
    /// Errors caused by bad parameters or files are input errors; the rest
    /// are numeric failures.
    fn from(e: Error) -> Self {
        match e {
            Error::SchemaViolation(_)
            | Error::InvalidNeck(_)
            | Error::InvalidArgument(_)
            | Error::InvalidR(_)
            | Error::MuZero
            | Error::MuOne
            | Error::NotPeriodic => CliError::Input(e),
            _ => CliError::Numeric(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
