//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building surfaces, colorings,
/// operators, symbols or representations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The graph description is structurally malformed.
    #[error("invalid graph: {0}")]
    Graph(String),

    /// A level is incompatible with the boundary data (divisibility, range).
    #[error("invalid level: {0}")]
    Level(String),

    /// A coloring violates parity, triangle or level conditions.
    #[error("inadmissible coloring: {0}")]
    Inadmissible(String),

    /// A curve description is inconsistent or not in Dehn position.
    #[error("invalid curve: {0}")]
    Curve(String),

    /// The request is well-formed but outside what the engine implements.
    #[error("capability boundary: {0}")]
    Capability(String),

    /// The curve has no entry in the word table of the requested surface.
    #[error("not in word table: {0}")]
    NotInWordTable(String),

    /// Two objects that must live over the same graph do not.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// A real coloring lies outside the open admissible domain.
    #[error("outside the admissible domain: {0}")]
    Domain(String),

    /// A least-squares fit could not be carried out reliably.
    #[error("ill-conditioned fit: {0}")]
    Fit(String),

    /// A calibration step failed to find a consistent answer.
    #[error("calibration failed: {0}")]
    Calibration(String),

    /// Malformed scenario or other user input.
    #[error("usage error: {0}")]
    Usage(String),

    /// Filesystem or serialization failure.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Usage(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
