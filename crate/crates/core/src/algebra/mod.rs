//! Exact arithmetic over the rationals and the polynomial machinery
//! (gcd, resultants, square-free parts, Groebner bases) that the geometric
//! layers reduce to.

mod gcd;
mod groebner;
mod parse;
mod poly;
mod ratfun;
mod resultant;
pub mod scalar;

pub use gcd::{poly_gcd, poly_gcd_many, squarefree_part};
pub use groebner::{groebner_basis, ideal_is_trivial, normal_form, variety_within_points};
pub use parse::parse_poly;
pub use poly::{Mono, Poly};
pub use ratfun::RatFun;
pub use resultant::resultant;
pub use scalar::{parse_scalar, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("arity mismatch: expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("resultant requires positive degree in the eliminated variable")]
    DegenerateDegrees,
    #[error("composition is indeterminate everywhere")]
    IndeterminateComposition,
    #[error("parse error: {0}")]
    Parse(String),
}
