use erlimit::{RateError, SimError, SolveError, SpectralError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<RateError> for CliError {
    fn from(e: RateError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InvalidC(_) => CliError::Usage(e.to_string()),
            SolveError::Rate(r) => r.into(),
            SolveError::Infeasible { .. } | SolveError::CapReached { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(_) | SimError::Rate(_) => CliError::Usage(e.to_string()),
            SimError::Overflow { .. } | SimError::Length { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Dimension { .. } => CliError::Usage(e.to_string()),
            SpectralError::NoConvergence { .. } => CliError::Numeric(e.to_string()),
        }
    }
}
