use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The order relation contains a cycle or is otherwise not a partial order.
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("not a distributive lattice: {0}")]
    NotLattice(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    /// A unary operation breaks the law its polarity requires.
    #[error("polarity violation for `{symbol}`: {detail}")]
    Polarity { symbol: String, detail: String },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    /// A configured size guard would be exceeded. Never a silent truncation.
    #[error("size guard `{guard}` exceeded: {actual} > {limit}")]
    GuardExceeded {
        guard: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A duality theorem or lemma was falsified by a computation. This always
    /// indicates a bug.
    #[error("internal assertion failed: {0}")]
    Assertion(String),
}

impl Error {
    pub(crate) fn guard(guard: &'static str, limit: usize, actual: usize) -> Self {
        Error::GuardExceeded {
            guard,
            limit,
            actual,
        }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}

/// Returns `Error::Assertion` with the formatted message unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Assertion(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
