//! Exact arithmetic in the fraction field of integer Laurent polynomials.

mod modp;
mod monomial;
mod parse;
mod poly;
mod rational;
mod var;

use thiserror::Error;

pub use monomial::Monomial;
pub use parse::{parse_poly, parse_rational};
pub use poly::LaurentPolynomial;
pub use rational::RationalFunction;
pub use var::Var;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by an identically zero function")]
    DivisionByZero,
    #[error("pole at {0} = 1 survives cancellation")]
    PoleAtOne(String),
    #[error("variable {0} is not bound")]
    Unbound(String),
    #[error("exponent out of range")]
    ExponentOverflow,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Shorthand for a rational constant.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
