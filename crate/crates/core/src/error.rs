use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument or configuration value outside the valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected} amplitudes, got {got}")]
    Dimension { expected: usize, got: usize },

    /// The integrator produced a non-finite amplitude.
    #[error("integration failed at step {step} (t = {time}): non-finite amplitude")]
    Integration { step: usize, time: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
