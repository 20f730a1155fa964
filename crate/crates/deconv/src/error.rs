//! Error type shared by every module of the crate.

/// Crate-wide error type.
///
/// Numerical routines in this crate are deterministic, so every failure is a
/// property of the *inputs*: a malformed configuration, an argument outside a
/// routine's mathematical domain, a request a given object cannot honour, or a
/// malformed input file.  Each failure mode gets its own variant so callers
/// can match on the class of problem without parsing message strings.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration is structurally invalid (unknown keys, empty lists,
    /// inconsistent combinations of options, an empty model grid, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument lies outside the mathematical domain of the routine
    /// (e.g. a signal-to-noise ratio at or below 1 where the penalty factor
    /// `(1 - 1/s2n)^2` degenerates, a bandwidth `ell <= 0`, or an AR
    /// coefficient outside `(0, 1)`).
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is well-formed but the target object cannot honour it
    /// (e.g. an interval-based integrated squared error for a density with no
    /// closed-form pdf).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A buffer has an unusable size (the spectral transforms require
    /// power-of-two lengths; empty samples are rejected here too).
    #[error("size error: {0}")]
    Size(String),

    /// A text input (sample file) failed to parse.  `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand constructor for [`Error::Config`].
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Shorthand constructor for [`Error::Domain`].
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Shorthand constructor for [`Error::Unsupported`].
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    /// Shorthand constructor for [`Error::Size`].
    pub fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }
}
