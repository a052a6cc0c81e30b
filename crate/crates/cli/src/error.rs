use std::fmt;

use graphon_cpd_core::Error;

/// Failure of a command, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments or parameters (exit 1).
    Usage(String),
    /// Unreadable, malformed or inconsistent input (exit 2).
    Data(String),
    /// A numerical routine failed (exit 3).
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn io(context: &str, err: std::io::Error) -> Self {
        CliError::Data(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let msg = err.to_string();
        match err {
            Error::Numeric(_) | Error::EmptyNeighborhood { .. } => CliError::Numeric(msg),
            Error::EmptySequence
            | Error::NodeCountMismatch { .. }
            | Error::InvalidAdjacency { .. }
            | Error::DimensionMismatch { .. }
            | Error::TooFewNodes { .. } => CliError::Data(msg),
            Error::WindowOutOfRange { .. }
            | Error::ProbabilityOutOfRange { .. }
            | Error::InvalidParameter { .. }
            | Error::WindowTooWide { .. }
            | Error::UnknownScenario(_)
            | Error::SegmentDivisibility { .. }
            | Error::DegenerateScenario { .. }
            | Error::PointOutOfRange { .. } => CliError::Usage(msg),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Data(err.to_string())
    }
}
