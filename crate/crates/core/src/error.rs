use thiserror::Error;

/// Errors shared across the simulator, state library, compiler and protocols.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An operation was called in a way its contract forbids.
    #[error("usage error: {0}")]
    Usage(String),

    /// The requested grid cannot resolve the state to the required accuracy.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// State support would leave the grid.
    #[error("domain overflow: {0}")]
    DomainOverflow(String),

    /// The backend does not implement the requested gate.
    #[error("capability error: {0}")]
    Capability(String),

    /// A representation limit (e.g. term count) was exceeded.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// A numeric argument violates a mathematical constraint.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A protocol precondition does not hold.
    #[error("precondition error: {0}")]
    Precondition(String),

    /// Malformed circuit file or config document.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
