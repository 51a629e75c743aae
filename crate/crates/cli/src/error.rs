use std::fmt;

use cvcluster::Error;

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_GAUGE: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;
pub const EXIT_SEARCH_EXHAUSTED: u8 = 5;

/// A message for standard error plus the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into() }
    }

    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::DuplicateEdge { .. }
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::NonFinite
            | Error::InvalidScale { .. }
            | Error::InvalidSweep
            | Error::NotHermitian { .. }
            | Error::NotSymmetric { .. }
            | Error::NotOrthogonal { .. } => EXIT_PARSE,
            Error::GaugeIncompatible { .. } => EXIT_GAUGE,
            Error::SearchExhausted { .. } => EXIT_SEARCH_EXHAUSTED,
            _ => EXIT_NUMERICAL,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::parse(format!("invalid JSON: {e}"))
    }
}
