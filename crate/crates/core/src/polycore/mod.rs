//! Exact scalars, polynomials, rational functions, determinants and
//! real-root counting.

pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod sturm;

pub use matrix::{det_bareiss, det_cofactor, determinant, minor, sylvester_check, vandermonde, ExactDivRing, Matrix};
pub use poly::{falling_factorial, Poly};
pub use ratfunc::RationalFunction;
pub use scalar::{
    binomial, factorial, factorial_q, format_rational, imag_pow, imag_unit, int, parse_rational, pow, powi, rat,
    rational_serde, sign_pow, DualRational, Embed, Exact, Field, GaussRational, Rational, Ring,
};
pub use sturm::{cauchy_bound, fujiwara_bound, natural_zeros, root_bound, real_root_count, sign_constant_on_naturals, NaturalSign, RootInterval};
