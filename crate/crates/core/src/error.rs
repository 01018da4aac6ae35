use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The variants mirror the failure classes used by the `plearn` binary for
/// its exit codes: validation problems (`Domain`, `Argument`, `Io`, `Json`)
/// map to 2, violated contracts to 3 and capacity guards to 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("capacity guard exceeded: {0}")]
    Capacity(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("unsupported capability: {0}")]
    Capability(String),

    #[error("learner failure: {0}")]
    LearnerFailure(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable kind tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Argument(_) => "argument",
            Error::Capacity(_) => "capacity",
            Error::Contract(_) => "contract",
            Error::Capability(_) => "capability",
            Error::LearnerFailure(_) => "learner_failure",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// Process exit code used by the command line harness.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Argument(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::Contract(_) | Error::LearnerFailure(_) | Error::Capability(_) => 3,
            Error::Capacity(_) => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
