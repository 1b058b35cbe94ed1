//! Library side of the `chanfid` command: document parsing, report emission and the
//! subcommand implementations.

pub mod commands;
pub mod document;
pub mod report;

use thiserror::Error;

/// Failure of a CLI invocation, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or invalid input (exit code 2).
    #[error("{0}")]
    Input(String),
    /// A certificate or inequality failed during computation (exit code 1).
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl From<channel_fidelity::Error> for CliError {
    fn from(e: channel_fidelity::Error) -> Self {
        use channel_fidelity::Error as E;
        match e {
            E::CertificateFailed { .. } | E::Infeasible(_) | E::NoConvergence { .. } | E::Leakage { .. } => {
                CliError::Compute(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
