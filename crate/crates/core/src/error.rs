// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid value for `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("empty corpus after filtering")]
    EmptyCorpus,

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("{algorithm} did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence {
        algorithm: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("no attribute record for account {0:?}")]
    MissingAttribute(String),

    #[error("schema version mismatch: expected {expected}, found {found}")]
    Version { expected: String, found: String },

    #[error("graph invariant violated: {0}")]
    Graph(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit status: 1 for input/validation problems, 2 for
    /// numerical failures (non-convergence, undefined metrics).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence { .. } | Error::UndefinedMetric(_) | Error::UndefinedRatio(_) => 2,
            _ => 1,
        }
    }
}
