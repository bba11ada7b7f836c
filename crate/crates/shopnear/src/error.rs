use std::io;
use std::path::PathBuf;

use shopnear_core::{GeoError, MineError, MoneyError, OrderError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Validation(String),
    #[error("{kind} {id} not found")]
    NotFound { kind: &'static str, id: u64 },
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    InvalidState(String),
    #[error("{0}")]
    Forbidden(String),
    #[error("{0}")]
    Unauthenticated(String),
    #[error("cannot load {}: {reason}", path.display())]
    Load { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub fn not_found(kind: &'static str, id: impl Into<u64>) -> Self {
        Error::NotFound { kind, id: id.into() }
    }

    /// Stable machine-readable code carried in the wire envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::NotFound { .. } => "not_found",
            Error::Conflict(_) => "conflict",
            Error::InvalidState(_) => "invalid_state",
            Error::Forbidden(_) => "forbidden",
            Error::Unauthenticated(_) => "unauthenticated",
            Error::Load { .. } | Error::Io(_) => "internal",
        }
    }
}

impl From<GeoError> for Error {
    fn from(e: GeoError) -> Self {
        Error::Validation(e.to_string())
    }
}

impl From<MineError> for Error {
    fn from(e: MineError) -> Self {
        Error::Validation(e.to_string())
    }
}

impl From<MoneyError> for Error {
    fn from(e: MoneyError) -> Self {
        Error::Validation(e.to_string())
    }
}

impl From<OrderError> for Error {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::AlreadyDecided(_) => Error::InvalidState(e.to_string()),
            _ => Error::Validation(e.to_string()),
        }
    }
}
