//! CLI error handling and exit codes: 0 success, 1 domain failure, 2 usage.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments or argument values; exits 2.
    Usage(String),
    /// A library-level failure; exits 1.
    Domain(pdt::Error),
    /// A reference check did not pass; exits 1.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Check(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Check(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pdt::Error> for CliError {
    fn from(e: pdt::Error) -> Self {
        CliError::Domain(e)
    }
}
