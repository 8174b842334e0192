use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("bimatrix is singular (smallest singular value {sigma_min:e} of the embedding)")]
    SingularBimatrix { sigma_min: f64 },

    #[error("matrix is singular in {0}")]
    SingularMatrix(&'static str),

    #[error("{what} violates its structure (deviation {deviation:e})")]
    StructureViolation { what: &'static str, deviation: f64 },

    #[error("{0} is not positive definite")]
    NotPositiveDefinite(&'static str),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid solver options: {0}")]
    InvalidOptions(String),

    #[error("iteration did not converge within {iterations} steps (last step {step:e})")]
    NotConvergent { iterations: usize, step: f64 },

    #[error(
        "iteration diverged at step {iteration} (norm {norm:e} exceeds bound {bound:e}); system is not stabilizable"
    )]
    Diverged { iteration: usize, norm: f64, bound: f64 },
}

impl Error {
    pub(crate) fn dims(context: &'static str, expected: impl std::fmt::Display, found: impl std::fmt::Display) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
