use thiserror::Error;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("invalid payload: {0}")]
    InvalidPayload(String),
    #[error("invalid message: {0}")]
    InvalidMessage(String),
    #[error("unknown session {0}")]
    NotFound(String),
    #[error(transparent)]
    Core(#[from] rinx_core::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl SessionError {
    /// Stable machine-readable code used in error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Self::InvalidPayload(_) => "invalid_payload",
            Self::InvalidMessage(_) => "invalid_message",
            Self::NotFound(_) => "not_found",
            Self::Core(rinx_core::Error::InvalidConfig(_)) => "invalid_payload",
            Self::Core(_) => "computation_failed",
            Self::Internal(_) => "internal",
        }
    }
}
