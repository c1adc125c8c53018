use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument fell outside its admissible range.
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("vector norm {norm} is not within 1e-6 of 1")]
    NotUnit { norm: f64 },

    #[error("need at least {min} vertices, got {n}")]
    TooFewVertices { n: u64, min: u64 },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("probability mass function sums to {total}, expected 1")]
    Unnormalized { total: f64 },

    #[error("{0}")]
    InvalidArgument(String),
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<f64> {
    if value.is_nan() || value < lo || value > hi {
        Err(Error::OutOfRange { name, value, range })
    } else {
        Ok(value)
    }
}
