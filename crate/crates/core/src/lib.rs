//! Exceptional Charlier and Hermite polynomials in exact arithmetic.
//!
//! The building blocks are generic over the coefficient ring (see
//! [`polycore::Ring`]); the aliases below fix the rings used by the
//! constructions and the command-line tool.

pub mod certified;
pub mod conjecture;
pub mod error;
pub mod exceptional;
pub mod families;
pub mod fsets;
pub mod measures;
pub mod operators;
pub mod polycore;
pub mod report;

pub use error::{Error, Result};
pub use report::{CheckKind, VerificationReport};

/// Polynomial with big-rational coefficients.
pub type QPoly = polycore::Poly<polycore::Rational>;
/// Polynomial with Gaussian-rational coefficients.
pub type GPoly = polycore::Poly<polycore::GaussRational>;
/// Polynomial with dual-rational coefficients.
pub type DPoly = polycore::Poly<polycore::DualRational>;
/// Floating-point polynomial, for plotting grids.
pub type FPoly = polycore::Poly<f64>;
/// Rational function over the rationals.
pub type QRatFn = polycore::RationalFunction<polycore::Rational>;
