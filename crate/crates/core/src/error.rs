use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("solver did not converge after {iterations} iterations (last change {last_change:.3e})")]
    NotConverged {
        iterations: usize,
        last_change: f64,
        trace: Vec<f64>,
    },

    #[error("degenerate iterate: {0}")]
    Degenerate(String),

    #[error("no bracket: both ends of [{lo}, {hi}] classify as {outcome}")]
    NoBracket { lo: f64, hi: f64, outcome: String },

    #[error("step size underflow at r = {r:.6e}")]
    StepUnderflow { r: f64 },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameters(_) => "invalid_parameters",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::InvalidProfile(_) => "invalid_profile",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Divergent(_) => "divergent",
            Error::NotConverged { .. } => "not_converged",
            Error::Degenerate(_) => "degenerate",
            Error::NoBracket { .. } => "no_bracket",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::Format { .. } => "format",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
