use std::path::PathBuf;

use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A cosmological model is inconsistent (negative H², broken closure, ...).
    #[error("model error: {0}")]
    Model(String),

    /// An iterative method gave up before reaching the requested accuracy.
    #[error("accuracy error: {reason} (best estimate {estimate:e}, error estimate {error:e})")]
    Accuracy { reason: String, estimate: f64, error: f64 },

    /// A root search was started on an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// Evaluation on a pole, a light cone or a coincidence point.
    #[error("singularity: {0}")]
    Singularity(String),

    /// A parameter fit could not be completed.
    #[error("fit error: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    /// A data file does not have the expected layout.
    #[error("format error: {0}")]
    Format(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn singular(msg: impl Into<String>) -> Self {
        Error::Singularity(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
