use thiserror::Error;

/// Errors raised by the geometry, planning, and operator layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GleasonError {
    #[error("gradient of the defining function vanishes at {at}")]
    GradientVanishes { at: String },

    #[error("point is not on the boundary: |r| = {residual:e} exceeds tolerance {tolerance:e}")]
    NotOnBoundary { residual: f64, tolerance: f64 },

    #[error("cannot project onto the line through 0 and a zero vector")]
    ZeroDirection,

    #[error("collar cover failed: {0}")]
    CoverFailure(String),

    #[error("Newton iteration for the collar chart diverged in patch {patch} after {iterations} iterations")]
    NewtonDivergence { patch: usize, iterations: usize },

    #[error("line direction must have unit norm, got |b| = {norm}")]
    DegenerateDirection { norm: f64 },

    #[error("slice has no boundary crossing")]
    NoCrossing,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial does not vanish at the origin (constant term {constant})")]
    NonVanishing { constant: String },

    #[error("least-squares system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("projected normal is not collinear with z (residual {residual:e})")]
    NotCollinear { residual: f64 },

    #[error("no safe path from 0 to {endpoint} at clearance {clearance}")]
    NoSafePath { endpoint: String, clearance: f64 },

    #[error("derivative circle leaves the domain at node {node} (r = {value:e})")]
    CircleExitsDomain { node: String, value: f64 },

    #[error("Cauchy quadrature did not converge: m vs 2m discrepancy {discrepancy:e}")]
    NonConvergent { discrepancy: f64 },

    #[error("adaptive quadrature exceeded its panel budget ({panels} panels)")]
    QuadratureStall { panels: usize },

    #[error("SY system is singular: |det| = {determinant:e}")]
    SingularSystem { determinant: f64 },

    #[error("point {at} lies outside the domain")]
    PointOutsideDomain { at: String },

    #[error("method {method} is inapplicable: {reason}")]
    MethodInapplicable { method: String, reason: String },

    #[error("sequence point left collar patch {patch}")]
    PatchSeam { patch: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, GleasonError>;
