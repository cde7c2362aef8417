use std::process::ExitCode;

use thiserror::Error;

/// Failure classes, each with its own process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Data(_) => ExitCode::from(2),
            CliError::Numeric(_) => ExitCode::from(3),
        }
    }
}

impl From<rtfilter::Error> for CliError {
    fn from(e: rtfilter::Error) -> Self {
        use rtfilter::Error as E;
        let msg = e.to_string();
        match e {
            E::Config(_) | E::Truncation { .. } => CliError::Usage(msg),
            E::Parse { .. } | E::DuplicateDate { .. } | E::Empty | E::NoValidDays | E::Io(_) => {
                CliError::Data(msg)
            }
            E::Domain { .. } | E::NonFinite(_) | E::NoConvergence(_) => CliError::Numeric(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
