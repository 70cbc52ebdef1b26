use thiserror::Error;

/// Failures reported by every fallible operation in the crate.
///
/// The three computational variants map one-to-one onto the CLI exit codes
/// (2, 3 and 4 respectively).
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("invalid parameter: {0}")]
    Param(String),
    /// The requested computation exceeds a configured size or time budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A mathematical invariant that must hold was observed to fail.
    #[error("property violated: {0}")]
    Property(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! param_err {
    ($($arg:tt)*) => { $crate::error::Error::Param(format!($($arg)*)) };
}

macro_rules! budget_err {
    ($($arg:tt)*) => { $crate::error::Error::Budget(format!($($arg)*)) };
}

macro_rules! property_err {
    ($($arg:tt)*) => { $crate::error::Error::Property(format!($($arg)*)) };
}

pub(crate) use budget_err;
pub(crate) use param_err;
pub(crate) use property_err;
