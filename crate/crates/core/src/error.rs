use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("crop error: {0}")]
    Crop(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    /// A non-finite value showed up in a parameter or gradient buffer.
    #[error("numerical error in {path}: {message}")]
    Numerical { path: String, message: String },

    #[error("training diverged at iteration {iteration}: loss {loss:.4} vs initial {initial:.4}")]
    Divergence {
        iteration: usize,
        loss: f64,
        initial: f64,
    },

    #[error("pipeline failed for scenario seed {seed}: {source}")]
    Pipeline {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed file: {0}")]
    Format(String),

    #[error("missing input: {0}")]
    Missing(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
