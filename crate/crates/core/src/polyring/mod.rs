//! Exact sparse multivariate polynomials over the Gaussian rationals.

mod fraction;
mod gauss;
mod json;
mod modp;
mod poly;

pub use fraction::PolyFraction;
pub use gauss::{parse_rational, rational_to_string, GaussRational};
pub use json::PolyJson;
pub use modp::ModPoly;
pub use poly::{same_ring, FloatPoly, Monomial, Polynomial, Ring, RingRef};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("variable sets differ")]
    RingMismatch,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("no value assigned to variable {0}")]
    MissingAssignment(String),
    #[error("denominator vanishes")]
    ZeroDenominator,
    #[error("prime {prime} divides the denominator of coefficient {coeff}")]
    BadPrime { prime: u64, coeff: String },
    #[error("coefficient {0} is not real")]
    NonReal(String),
    #[error("parse error: {0}")]
    Parse(String),
}
