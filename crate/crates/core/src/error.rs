use std::fmt;

/// Errors raised by the numerical and exact routes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded in {route}: needs {needed}, cap is {cap}")]
    Capacity { route: &'static str, needed: Size, cap: u128 },

    #[error(
        "quadrature did not converge: value {value:e}, order-doubling change {estimate:e} exceeds tolerance {tolerance:e}"
    )]
    Convergence { value: f64, estimate: f64, tolerance: f64 },
}

/// A size requirement that may overflow `u128` (e.g. `n^(2q)` term counts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    Exactly(u128),
    Overflow,
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Size::Exactly(v) => write!(f, "{v}"),
            Size::Overflow => f.write_str("more than 2^128"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
