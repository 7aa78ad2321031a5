use thiserror::Error;

/// Errors produced by the model, the engine and configuration validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter fell outside its legal interval. `constraint` is the interval
    /// as written in the model, e.g. `μ ∈ (0.5; 1]`.
    #[error("{name} = {value} violates {constraint}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Both expected memory counts vanish, so the confidence ratio is undefined.
    #[error("degenerate model: {0}")]
    Degenerate(String),

    /// A sampler recorded nothing it could form a ratio from.
    #[error("no data: {0}")]
    NoData(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Checks `lo <= value <= hi`, rejecting NaN.
pub(crate) fn check_closed(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    constraint: &'static str,
) -> Result<f64> {
    if value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            constraint,
        })
    }
}

/// Checks `lo < value <= hi`, rejecting NaN.
pub(crate) fn check_left_open(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    constraint: &'static str,
) -> Result<f64> {
    if value > lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            constraint,
        })
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    check_closed(name, value, 0.0, 1.0, "[0; 1]")
}
