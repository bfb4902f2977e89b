//! Error taxonomy shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failures surfaced by the toolkit.
///
/// The variants map to distinct caller mistakes or runtime conditions and
/// drive the CLI exit codes: configuration and usage problems exit with 2,
/// integrity violations with 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A setting is outside the supported range (qubit caps, enumeration
    /// budgets, empty gate sets).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with inconsistent arguments (bad indices,
    /// mismatched dimensions, empty inputs).
    #[error("usage error: {0}")]
    Usage(String),

    /// A genome is inconsistent with its alphabet — corrupt state that
    /// should be impossible through the public API.
    #[error("genome integrity error: {0}")]
    Integrity(String),

    /// A numerical guard tripped: non-hermitian input, trace drift,
    /// significantly negative eigenvalues, or a diverging eigensolve.
    #[error("numerical integrity error: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
