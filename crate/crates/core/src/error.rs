use thiserror::Error;

/// Errors raised by model construction and the count-statistics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite coefficient C_{index}")]
    NonFinite { index: usize },
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("{what} = {value} is out of range ({allowed})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        allowed: String,
    },
    #[error("numeric overflow at N = {n}")]
    Overflow { n: usize },
    #[error("pmf did not reach mass tolerance {tolerance:e} before s = {cap}")]
    NonConvergent { cap: usize, tolerance: f64 },
    #[error("tail mass {tail_bound:e} too large for factorial cumulants")]
    TailTooHeavy { tail_bound: f64 },
    #[error("bad mixture spec: {0}")]
    BadSpec(String),
    #[error("pmf has negative mass {value:e} at s = {s}")]
    InadmissiblePmf { s: usize, value: f64 },
    #[error("{got} samples is below the floor of {needed} for order {l_max}")]
    TooFewSamples {
        got: usize,
        needed: usize,
        l_max: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, value: usize, allowed: impl Into<String>) -> Error {
    Error::OutOfRange {
        what,
        value,
        allowed: allowed.into(),
    }
}
