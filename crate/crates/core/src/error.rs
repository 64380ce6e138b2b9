use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature rule needs {requested} nodes, budget is {budget}")]
    NodeBudget { requested: usize, budget: usize },

    #[error("adaptive quadrature did not converge after {panels} panels (estimated error {error:e}, requested {requested:e})")]
    NonConvergence {
        panels: usize,
        error: f64,
        requested: f64,
    },

    #[error("integration box too small: kernel tail mass {tail:e} exceeds {tolerance:e}")]
    TailTolerance { tail: f64, tolerance: f64 },

    #[error("modular is not finite at any bracket (last lambda {lambda:e})")]
    Divergence { lambda: f64 },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("wrong measure: {0}")]
    WrongMeasure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
