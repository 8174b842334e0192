use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_STABILIZABLE: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{path}: invalid JSON: {source}")]
    Json { path: PathBuf, source: serde_json::Error },

    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("system not stabilizable: {0}")]
    NotStabilizable(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Solver(#[from] cvlqr::Error),
}

impl CliError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        use cvlqr::Error as E;
        match self {
            CliError::Read { .. } | CliError::Json { .. } | CliError::Field { .. } => EXIT_INPUT,
            CliError::Write { .. } => EXIT_INPUT,
            CliError::NotStabilizable(_) => EXIT_NOT_STABILIZABLE,
            CliError::Verification(_) => EXIT_NO_CONVERGENCE,
            CliError::Solver(e) => match e {
                E::DimensionMismatch { .. }
                | E::InvalidWeights(_)
                | E::InvalidOptions(_)
                | E::StructureViolation { .. } => EXIT_INPUT,
                E::Diverged { .. } => EXIT_NOT_STABILIZABLE,
                E::NotConvergent { .. }
                | E::SingularBimatrix { .. }
                | E::SingularMatrix(_)
                | E::NotPositiveDefinite(_) => EXIT_NO_CONVERGENCE,
            },
        }
    }

    /// Diagnostic line for stderr.
    pub fn diagnostic(&self) -> String {
        format!("error: {self}")
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
