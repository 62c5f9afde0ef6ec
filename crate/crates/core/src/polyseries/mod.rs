//! Univariate polynomials, rational functions and truncated Laurent series
//! over an exact [`Field`](crate::exactnum::Field).

mod dense;
mod poly;
mod ratfun;
mod series;

use thiserror::Error;

pub use dense::{mul_coeffs, KARATSUBA_THRESHOLD};
pub(crate) use poly::{euclid_gcd, rational_primitive_gcd};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at {0}")]
    Pole(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
}
