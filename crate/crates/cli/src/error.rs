//! CLI error channel with the exit-code contract: 0 success, 2 configuration
//! error, 3 numeric failure, 4 verification failure. I/O problems that are
//! neither (e.g. an unwritable output path) exit 1.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Invalid or inconsistent configuration; the message names the violated
    /// invariant. Exit code 2.
    Config(String),
    /// A numeric routine failed on valid configuration (singular derivative,
    /// regulated pole, convergence failure, ...). Exit code 3.
    Numeric(String),
    /// The verification suite ran and at least one check failed. Exit code 4.
    Verification,
    /// Filesystem failure outside the numeric contract. Exit code 1.
    Io(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Verification => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            CliError::Verification => write!(f, "verification failed; see the emitted report"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<modflow_core::Error> for CliError {
    fn from(e: modflow_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Remaps a core error to the configuration channel; used while validating
/// user-supplied regions and points, where a core rejection means the config
/// itself violates an invariant.
pub fn config_err(e: modflow_core::Error) -> CliError {
    CliError::Config(e.to_string())
}
