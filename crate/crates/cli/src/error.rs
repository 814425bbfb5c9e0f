use std::fmt;

use schwarz_core::Error;

/// Process exit codes. They are part of the command-line contract.
pub mod exit {
    pub const OK: u8 = 0;
    /// Validation or a requested check failed.
    pub const CHECK_FAILED: u8 = 1;
    /// Unreadable input, malformed JSON or bad arguments.
    pub const PARSE: u8 = 2;
    /// A point lies in the exclusion band of the contour.
    pub const NEAR_BOUNDARY: u8 = 3;
    /// A logarithm could not be continued at this sampling density.
    pub const BRANCH_UNRESOLVED: u8 = 4;
    /// The geometry does not support the requested operation.
    pub const INCOMPATIBLE: u8 = 5;
    /// Any other numerical failure.
    pub const NUMERIC: u8 = 6;
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Core(e) => match e {
                Error::CurveNotSimple(_)
                | Error::InvalidPolygon(_)
                | Error::BadAnnulusRadius(_)
                | Error::NonPositiveRadius(_) => exit::CHECK_FAILED,
                Error::NearBoundary => exit::NEAR_BOUNDARY,
                Error::BranchUnresolved | Error::NotAnInteger(_) => exit::BRANCH_UNRESOLVED,
                Error::NotConformalMapCurve | Error::NotPolygon | Error::TangentNotMeromorphic => {
                    exit::INCOMPATIBLE
                }
                _ => exit::NUMERIC,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
