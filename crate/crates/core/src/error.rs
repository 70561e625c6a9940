use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OcoError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("inner solver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("feasible set is empty: {0}")]
    Infeasible(String),

    #[error("scenario stream exhausted at round {round}")]
    StreamExhausted { round: usize },
}

pub type Result<T> = std::result::Result<T, OcoError>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(OcoError::DimensionMismatch { expected, found })
    }
}
