use std::process::ExitCode;

use nlangle_core::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error("{0}")]
    Regime(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Spec(_) => ExitCode::from(2),
            CliError::Regime(_) => ExitCode::from(3),
            CliError::Solver(_) => ExitCode::from(5),
            CliError::Io(_) => ExitCode::from(1),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedRegime { .. } => CliError::Regime(e.to_string()),
            Error::SingularSystem { .. }
            | Error::SolverFailure(_)
            | Error::SingularMatrix { .. }
            | Error::NoConvergence { .. }
            | Error::ContourThroughZero { .. }
            | Error::TooLarge(_) => CliError::Solver(e.to_string()),
            _ => CliError::Spec(e.to_string()),
        }
    }
}
