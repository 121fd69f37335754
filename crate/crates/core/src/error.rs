use thiserror::Error;

/// Errors produced anywhere in the reconstruction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("word length {0} is outside the supported range 1..=64")]
    UnsupportedLength(usize),

    #[error("coordinate {coord} out of range 1..={length}")]
    CoordinateOutOfRange { coord: usize, length: usize },

    #[error("code needs at least two words, found {0}")]
    TooFewWords(usize),

    #[error("duplicate word {0}")]
    DuplicateWord(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    /// Input graph (or derived structure) violates a property every genuine
    /// minimum distance graph has.
    #[error("invalid input graph: {0}")]
    InvalidGraph(String),

    #[error("{}line {line}: {msg}", path.as_deref().map(|p| format!("{p}: ")).unwrap_or_default())]
    Format {
        path: Option<String>,
        line: usize,
        msg: String,
    },

    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn graph(msg: impl Into<String>) -> Self {
        Error::InvalidGraph(msg.into())
    }

    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            path: None,
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn with_path(self, path: &str) -> Self {
        match self {
            Error::Format { line, msg, .. } => Error::Format {
                path: Some(path.to_owned()),
                line,
                msg,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
