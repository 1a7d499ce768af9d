//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a mathematical function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value type invariant (e.g. BLER ordering) does not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// Inconsistent model configuration, such as a combining model that
    /// needs a finite-blocklength context but was given none.
    #[error("configuration error: {0}")]
    Config(String),

    /// The solver bracket does not straddle the requested outage.
    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("non-monotone outage: {0}")]
    NonMonotone(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error in `{field}`: {constraint}")]
    Validation { field: String, constraint: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            constraint: constraint.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Validation { .. } | Error::Config(_) => 3,
            Error::NoBracket(_) | Error::NonMonotone(_) | Error::NoConvergence(_) => 4,
            Error::Domain(_) | Error::Invariant(_) => 5,
            Error::Io { .. } => 6,
        }
    }

    /// Short machine-readable tag used on the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DOMAIN_ERROR",
            Error::Invariant(_) => "INVARIANT_VIOLATION",
            Error::Config(_) => "CONFIGURATION_ERROR",
            Error::NoBracket(_) => "NO_BRACKET",
            Error::NonMonotone(_) => "NON_MONOTONE",
            Error::NoConvergence(_) => "NO_CONVERGENCE",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Validation { .. } => "VALIDATION_ERROR",
            Error::Io { .. } => "IO_ERROR",
        }
    }
}
