//! Crate-wide error type.

use thiserror::Error;

use crate::integrator::Trajectory;
use crate::real::Real;

#[derive(Error, Debug)]
pub enum Error<T: Real> {
    #[error("unknown {kind} `{name}`")]
    UnknownBuiltin { kind: &'static str, name: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} = {value} is outside the supported range ({bounds})")]
    OutOfRange {
        what: &'static str,
        value: T,
        bounds: &'static str,
    },

    #[error("non-finite {what} at t = {t}")]
    NonFinite { what: &'static str, t: T },

    #[error("integration exceeded {max_steps} steps at t = {t} (partial trajectory retained)")]
    MaxStepsExceeded {
        max_steps: usize,
        t: T,
        partial: Box<Trajectory<T>>,
    },

    #[error("step size underflow at t = {t} (step {step})")]
    StepUnderflow { t: T, step: T },

    #[error("adaptive quadrature failed to converge on [{a}, {b}]")]
    QuadratureDepth { a: T, b: T },

    #[error("solver stalled after {iterations} iterations (residual {residual})")]
    SolverStalled { iterations: usize, residual: T },

    #[error("Tikhonov path is not Cauchy: successive gaps {gaps:?}")]
    NonCauchyPath { gaps: Vec<T> },

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("too few usable points: need {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("table shape mismatch: {0}")]
    Shape(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl<T: Real> Error<T> {
    /// Exit status the CLI maps this error to: `2` for configuration
    /// problems, `1` for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownBuiltin { .. } | Error::Config(_) | Error::InvalidParameter(_) => 2,
            _ => 1,
        }
    }
}
