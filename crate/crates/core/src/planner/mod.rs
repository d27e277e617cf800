//! Curves `gamma_z` from 0 to 1 in the complex line through 0 and z.

mod plan;
mod raster;
mod validate;

pub use plan::{mu, plan_path, CollarPart, PathPlan, PlanKind, PlanOptions, SMALL_POINT};
pub use validate::{validate_path, PathValidation};
