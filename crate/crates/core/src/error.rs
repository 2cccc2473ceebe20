use thiserror::Error;

/// Errors produced by design construction, enumeration and catalog handling.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A design or matrix violates a structural invariant.
    #[error("validation error: {0}")]
    Validation(String),
    /// Two inputs that must agree in shape do not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An enumeration, bound or CLI configuration cannot be satisfied.
    #[error("configuration error: {0}")]
    Config(String),
    /// A catalog or bounds file is malformed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A lookup by identifier failed.
    #[error("not found: {0}")]
    NotFound(String),
    /// The exhaustive isomorphism oracle refused an input that is too large.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
