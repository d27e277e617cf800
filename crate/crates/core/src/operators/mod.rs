//! The operators T_i: Cauchy-circle derivatives, path integrals, the
//! recovery system, and the decomposition drivers.

mod cauchy;
mod continuity;
mod decompose;
mod estimate;
mod integral;
mod linalg;
mod quadrature;

pub use cauchy::{
    cauchy_directional_derivative, CauchyEstimate, CIRCLE_TOLERANCE, DEFAULT_CIRCLE_POINTS,
};
pub use continuity::{continuity_experiment, ContinuityReport, ContinuityRow};
pub use decompose::{
    decompose_at_point, decompose_polynomial, solve_sy, ApproximantOptions, DecomposeOptions,
    DecompositionReport, Diagnostics, Method, PolynomialDecomposition,
};
pub use estimate::{
    approach_boundary, build_k_sample, estimate_k, k_ratio, random_polynomial, ApproachRow, KRow,
    KSample, KSampleOptions, KTable,
};
pub use integral::{derivative_circles, integrate_i, IntegralEstimate, IntegralOptions};
pub use linalg::{cramer_solve, DETERMINANT_FLOOR};
pub use quadrature::{gauss_legendre, integrate, QuadOptions, Quadrature, GAUSS_POINTS};
