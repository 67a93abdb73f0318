use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
    #[error("`{name}` out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },
    #[error("resource limit exceeded for `{name}`: {reason}")]
    ResourceLimit { name: &'static str, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn out_of_range(name: &'static str, reason: impl Into<String>) -> Self {
        Error::OutOfRange {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn resource(name: &'static str, reason: impl Into<String>) -> Self {
        Error::ResourceLimit {
            name,
            reason: reason.into(),
        }
    }

    /// Name of the offending parameter.
    pub fn parameter(&self) -> &'static str {
        match self {
            Error::InvalidArgument { name, .. }
            | Error::OutOfRange { name, .. }
            | Error::ResourceLimit { name, .. } => name,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
