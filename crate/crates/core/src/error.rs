use crate::tensor::Shape;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch between {lhs} and {rhs}")]
    ShapeMismatch { op: &'static str, lhs: Shape, rhs: Shape },

    #[error("{op}: expected {expected}, got {got}")]
    BadShape { op: &'static str, expected: &'static str, got: Shape },

    #[error("unknown parameter `{0}`")]
    UnknownParam(String),

    #[error("backward already run on this graph; build a new graph or call backward_accumulate explicitly")]
    DoubleBackward,

    #[error("backward requires a scalar loss, got {0}")]
    NonScalarLoss(Shape),

    #[error("non-finite value in `{context}`: {value}")]
    NonFinite { context: String, value: f64 },

    #[error("non-finite gradient for parameter `{param}`")]
    NonFiniteGradient { param: String },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn parse(path: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub fn io(path: &str, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
