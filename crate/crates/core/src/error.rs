use thiserror::Error;

/// Errors raised by the simulator and analysis routines.
///
/// Everything except [`Error::Io`] is a configuration problem: the caller
/// passed something that cannot describe a valid run.
#[derive(Debug, Error)]
pub enum Error {
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("unknown model '{0}' (expected one of: quantum, nonlocal-stochastic, local-linear)")]
    UnknownModel(String),

    #[error("number of pairs must be at least 1")]
    ZeroPairs,

    #[error("chunk size must be at least 1")]
    ZeroChunkSize,

    #[error("{0} grid is empty")]
    EmptyGrid(&'static str),

    #[error("malformed range '{0}': {1}")]
    MalformedRange(String, &'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than a failing sink.
    pub fn is_config(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
