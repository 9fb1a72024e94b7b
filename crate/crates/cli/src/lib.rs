//! Library side of the `combwalk` command-line tool: configuration,
//! subcommand implementations and the parallel sweep runner.

pub mod commands;
pub mod config;
pub mod error;
pub mod sweep;

pub use config::ExperimentConfig;
pub use error::CliError;
