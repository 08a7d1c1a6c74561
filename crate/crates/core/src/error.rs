use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two inputs that must agree in length do not.
    #[error("length mismatch: expected {expected}, got {actual} ({what})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// Invalid code, trellis or profile description.
    #[error("invalid code description: {0}")]
    InvalidCode(String),

    /// Measures M1 and M2 need the transmitted bits.
    #[error("measure {0} requires labelled samples")]
    MissingLabels(&'static str),

    /// A curve violates one of its structural invariants.
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    /// A threshold bracket does not straddle the decoding threshold.
    #[error("invalid threshold bracket [{lo_db} dB, {hi_db} dB]: {reason}")]
    Bracket {
        lo_db: f64,
        hi_db: f64,
        reason: String,
    },

    /// The iterative recursion moved backwards.
    #[error("trajectory lost monotone progress at iteration {iteration} (mmse {mmse})")]
    NonMonotone { iteration: usize, mmse: f64 },

    /// A configuration document failed to parse or validate.
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
