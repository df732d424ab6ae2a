use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("work cap exceeded: {what} needs {requested} steps, cap is {cap}")]
    WorkCapExceeded {
        what: &'static str,
        requested: u128,
        cap: u64,
    },

    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("degree d = {0} is not supported (need d >= 3)")]
    UnsupportedDegree(u32),

    #[error("scaling vector entry {index} is zero")]
    ZeroScalingEntry { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exactness check failed; this points at an arithmetic bug.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("path cap exceeded: {paths} paths requested, cap is {cap}")]
    PathCapExceeded { paths: u128, cap: usize },

    #[error("inconclusive run: {failed} of {total} paths failed; retry with another seed")]
    Inconclusive { failed: usize, total: usize },
}
