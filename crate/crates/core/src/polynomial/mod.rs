//! Multivariate complex polynomials, the closed-form Leibenzon operator,
//! and least-squares polynomial approximants.

mod fit;
mod parse;
mod poly;

pub use fit::{fit_approximant, Approximant, MAX_CONDITION};
pub use parse::parse_polynomial;
pub use poly::{multi_indices, total_degree, MultiIndex, Polynomial, PolynomialJson, TermJson};
