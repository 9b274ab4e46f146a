use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("no protocol completion after {cap} generation attempts; success probability too small")]
    AttemptCapExceeded { cap: u64 },

    #[error("projection onto the target Bell state has zero probability")]
    DegenerateProjection,

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("empty input: {what}")]
    EmptyInput { what: &'static str },

    #[error("sweep spec line {line}: {message}")]
    SpecParse { line: usize, message: String },

    #[error("cell [{cell}]: {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }

    /// True when the error indicates bad user input rather than a runtime failure.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::InvalidParameter { .. }
            | Error::SpecParse { .. }
            | Error::EmptyInput { .. }
            | Error::LengthMismatch { .. }
            | Error::QubitIndex { .. } => true,
            Error::Cell { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}
