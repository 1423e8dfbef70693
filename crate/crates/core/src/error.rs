use thiserror::Error;

use crate::lcp::NewtonReport;

/// Errors raised by the solvers and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular pivot at row {row} (|pivot| = {pivot:e})")]
    SingularPivot { row: usize, pivot: f64 },

    #[error("semi-smooth Newton did not converge after {} iterations (residual {:e})", .report.iterations, .report.residual_inf)]
    NewtonNotConverged { report: NewtonReport },

    #[error("no feasible active set among {tried} candidates")]
    NoFeasibleActiveSet { tried: usize },

    #[error("time march failed at step {step}: {source}")]
    MarchFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("problem has no exact solution attached")]
    MissingExactSolution,

    #[error("evaluation window [{lo}, {hi}] lies outside the grid [{xmin}, {xmax}]")]
    WindowOutsideGrid { lo: f64, hi: f64, xmin: f64, xmax: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
