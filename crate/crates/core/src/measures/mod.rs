//! Orthogonality measures of the exceptional families: the Christoffel
//! transform behind the Charlier construction, certified inner products, and
//! the norm, positivity and orthogonality statements built on them.

pub mod christoffel;
pub mod inner;
pub mod norms;

pub use christoffel::{
    alpha, christoffel_alt_check, christoffel_data, christoffel_duality_check, christoffel_leading, christoffel_q,
    christoffel_q_alt, lambda_from_psi, largest_natural_zero, omega_from_phi, phi, psi, q_recurrence_check,
    q_recurrence_coefficients, xi, zeta, ChristoffelData,
};
pub use inner::{continuous_inner, discrete_inner, ContinuousWeight, DiscreteMeasure, InnerProductResult, Tolerance};
pub use norms::{
    charlier_norm_target, christoffel_norm_check, default_tolerances, hermite_norm_target, norm_check,
    orthogonality_check, parseval_check, positivity_equivalence_check, positivity_scan, NormCheck, PositivityVerdict,
};
