use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration value is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A configuration document could not be read or validated.
    #[error("configuration error: {0}")]
    Config(String),

    /// The evolution produced a non-finite value.
    #[error("divergence at step {step} (last finite time t = {last_good_time})")]
    Divergence { step: usize, last_good_time: f64 },

    /// A convergence rate was requested from a zero or negative error.
    #[error("convergence rate undefined: {0}")]
    UndefinedRate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
