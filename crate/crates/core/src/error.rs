use thiserror::Error;

/// Errors raised by the planning and relaxation routines.
///
/// Infeasibility of a single request is not an error: it is carried as
/// [`Workforce::INFEASIBLE`](crate::workforce::Workforce::INFEASIBLE) so that
/// matrices stay rectangular.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {what}: {reason}")]
    Validation { what: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cardinality error: k = {k} but only {available} strategies are available")]
    Cardinality { k: usize, available: usize },

    #[error("size cap exceeded: {what} needs {needed} but the cap is {cap}")]
    SizeCap {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("parse error at {location}: {reason}")]
    Parse { location: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(what: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            what: what.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(location: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Config(_) | Error::Parse { .. } | Error::Io(_) => 1,
            Error::Cardinality { .. } => 2,
            Error::SizeCap { .. } => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let location = e
            .position()
            .map(|p| format!("line {}", p.line()))
            .unwrap_or_else(|| "input".to_string());
        Error::parse(location, e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
