use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} {requested} exceeds the configured limit {limit}")]
    Resource {
        what: &'static str,
        requested: String,
        limit: String,
    },

    #[error("zeta({s}) is undefined here: the series diverges for s <= 1")]
    Domain { s: u32 },
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Precondition,
    Resource,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionMismatch { .. } | Error::InvalidInput(_) => ErrorKind::Usage,
            Error::Precondition(_) | Error::Domain { .. } => ErrorKind::Precondition,
            Error::Resource { .. } => ErrorKind::Resource,
        }
    }

    pub(crate) fn resource(
        what: &'static str,
        requested: impl ToString,
        limit: impl ToString,
    ) -> Self {
        Error::Resource {
            what,
            requested: requested.to_string(),
            limit: limit.to_string(),
        }
    }
}
