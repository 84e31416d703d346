//! Experiment runner for `hankel-spectra`: predictions, density sweeps and
//! verification suites driven by a JSON config.

pub mod commands;
pub mod config;
pub mod verify;

pub use commands::{cmd_predict, cmd_sweep};
pub use config::ExperimentConfig;
pub use verify::{cmd_verify, Suite};

use hankel_spectra::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("resource error: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } => CliError::Resource(e.to_string()),
            Error::Domain(_) | Error::Parameter(_) | Error::Precondition(_) | Error::Mode(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
