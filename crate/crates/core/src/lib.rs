//! Constructive Gleason decomposition on bounded domains in C^n.
//!
//! A holomorphic `f` with `f(0) = 0` is written as `f(z) = sum_i z_i T_i(f)(z)`
//! where `T_i(f)(z)` integrates the derivative `D_i f` along a curve in the
//! complex line through `0` and `z`. Near the boundary the curve bends
//! along a collar and the values are recovered from a small linear system.

pub mod cconvex;
pub mod cvec;
pub mod error;
pub mod geometry;
pub mod operators;
pub mod oracle;
pub mod planner;
pub mod polynomial;

pub use error::{GleasonError, Result};
