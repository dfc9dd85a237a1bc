use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The base table is too small for the requested query.
    #[error("insufficient sieve: need limit >= {needed}, tables have {limit}")]
    InsufficientSieve { needed: u64, limit: u64 },

    /// Exact arithmetic would overflow 128 bits.
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("allocation of {0} bytes failed")]
    Allocation(usize),

    #[error("unknown constant `{0}`")]
    UnknownConstant(String),

    #[error("corrupt table dump: {0}")]
    CorruptDump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
