//! Directional derivatives from Cauchy's formula on a circle:
//! `d/dt f(c + t e)|_0 = (1 / 2 pi i) oint f(c + t e) / t^2 dt`.

use std::f64::consts::TAU;

use crate::cvec::{self, C64};
use crate::error::{GleasonError, Result};
use crate::geometry::Domain;
use crate::oracle::HolomorphicOracle;

pub const DEFAULT_CIRCLE_POINTS: usize = 64;
pub const CIRCLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyEstimate {
    /// The 2m-point trapezoid value.
    pub value: C64,
    /// `|v_m - v_2m|`.
    pub discrepancy: f64,
}

/// Trapezoid rule on `|t| = rho` with 2m nodes; the m-point value is read
/// off the even nodes. With a domain, every node must satisfy `r < 0`, or
/// lie within the oracle's validity margin of the domain.
pub fn cauchy_directional_derivative(
    f: &dyn HolomorphicOracle,
    center: &[C64],
    direction: &[C64],
    radius: f64,
    m: usize,
    domain: Option<&Domain>,
) -> Result<CauchyEstimate> {
    if m < 16 {
        return Err(GleasonError::InvalidInput(format!(
            "circle needs at least 16 points, got {m}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(GleasonError::InvalidInput(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    let margin = f.validity_margin();
    let total = 2 * m;
    let mut even = C64::new(0.0, 0.0);
    let mut odd = C64::new(0.0, 0.0);
    for k in 0..total {
        let omega = C64::from_polar(1.0, TAU * k as f64 / total as f64);
        let node = cvec::axpy(center, omega * radius, direction);
        if let Some(d) = domain {
            let rv = d.r(&node);
            if rv >= 0.0 && (margin <= 0.0 || -d.boundary_distance(&node) >= margin) {
                return Err(GleasonError::CircleExitsDomain {
                    node: cvec::fmt_point(&d.to_original(&node)),
                    value: rv,
                });
            }
        }
        let term = f.eval(&node) / omega;
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
    }
    let v_m = even / (m as f64 * radius);
    let v_2m = (even + odd) / (total as f64 * radius);
    let discrepancy = (v_m - v_2m).norm();
    if discrepancy > CIRCLE_TOLERANCE * v_2m.norm().max(1.0) {
        return Err(GleasonError::NonConvergent { discrepancy });
    }
    Ok(CauchyEstimate {
        value: v_2m,
        discrepancy,
    })
}
