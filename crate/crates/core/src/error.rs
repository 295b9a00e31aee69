use alloc::string::String;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no path between vertices {a} and {b}")]
    NoPath { a: usize, b: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph on {n} vertices is too large for exhaustive enumeration (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("out of regime: {0}")]
    OutOfRegime(String),
    #[error("pivot {pivot:e} below floor {floor:e}: matrix is numerically singular")]
    NumericallySingular { pivot: f64, floor: f64 },
    #[error("solver residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn out_of_regime(msg: impl Into<String>) -> Error {
    Error::OutOfRegime(msg.into())
}
