use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in {field}: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Runtime(#[from] combwalk::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0} sweep cell(s) failed")]
    SweepFailures(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Runtime(combwalk::Error::Domain(_)) => 2,
            _ => 3,
        }
    }
}
