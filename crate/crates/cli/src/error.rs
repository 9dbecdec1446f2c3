use std::fmt;
use std::process::ExitCode;

use fraccolor::analysis::estimate::StatError;
use fraccolor::analysis::OracleError;
use fraccolor::engine::EngineError;
use fraccolor::generators::GenError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Regime(String),
    Structure(String),
    /// A statistical or exact check did not pass.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Regime(_) => 3,
            CliError::Structure(_) => 4,
            CliError::Check(_) => 5,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Regime(m) => write!(f, "regime error: {m}"),
            CliError::Structure(m) => write!(f, "structural check failed: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Domain(_) => CliError::Usage(e.to_string()),
            EngineError::Structure(_) => CliError::Structure(e.to_string()),
            EngineError::Regime { .. } => CliError::Regime(e.to_string()),
        }
    }
}

impl From<StatError> for CliError {
    fn from(e: StatError) -> Self {
        match e {
            StatError::Engine(e) => e.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::InvalidSpec(_) => CliError::Usage(e.to_string()),
            GenError::RetryExhausted { .. } => CliError::Structure(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Engine(e) => e.into(),
            OracleError::Structure(m) => CliError::Structure(m),
            OracleError::RepeatedDraw(_) => CliError::Check(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Monte Carlo failure with the standard advice.
pub fn statistical(what: &str) -> CliError {
    CliError::Check(format!(
        "{what}; Monte Carlo checks fail occasionally by chance, re-run with a fresh --seed"
    ))
}
