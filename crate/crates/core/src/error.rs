use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The characteristic matrix fails the independence condition on `face`.
    #[error("characteristic matrix is singular on face {{{}}}", .face.join(","))]
    Singular { face: Vec<String> },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn cap(msg: impl Into<String>) -> Self {
        Error::ResourceCap(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Singular { .. } | Error::Json(_) => 2,
            Error::ResourceCap(_) => 3,
            Error::Consistency(_) | Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
