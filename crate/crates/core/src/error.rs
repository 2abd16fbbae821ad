use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied data or parameters outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("unsupported dimension {0} (kernels support d = 1, 2, 3)")]
    UnsupportedDimension(usize),

    #[error("points file line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
