//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An iterative numerical procedure failed to reach its tolerance.
    #[error("numerical failure in {context}: {detail}")]
    Numerics { context: String, detail: String },

    /// The SDP constraint set admits no positive semidefinite solution.
    #[error("infeasible constraints: max violation {max_violation:.3e} ({detail})")]
    Infeasible { max_violation: f64, detail: String },

    /// A DSP stage failed; carries the stage name for diagnostics.
    #[error("dsp stage '{stage}' failed: {detail}")]
    Stage { stage: String, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file {path}: {detail}")]
    Format { path: String, detail: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn numerics(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Numerics {
            context: context.into(),
            detail: detail.into(),
        }
    }

    pub fn stage(stage: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            detail: detail.into(),
        }
    }
}
