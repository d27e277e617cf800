//! `I(z) = int_gamma D_e f(lambda z) d lambda` along a planned curve.

use crate::cvec::{self, CVec, C64};
use crate::error::Result;
use crate::geometry::Domain;
use crate::oracle::HolomorphicOracle;
use crate::planner::PathPlan;

use super::cauchy::{cauchy_directional_derivative, DEFAULT_CIRCLE_POINTS};
use super::quadrature::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralOptions {
    pub circle_points: usize,
    pub quad: QuadOptions,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions {
            circle_points: DEFAULT_CIRCLE_POINTS,
            quad: QuadOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegralEstimate {
    pub value: C64,
    pub quad_error: f64,
    pub circle_discrepancy: f64,
    pub panels: usize,
    pub evaluations: usize,
}

impl IntegralEstimate {
    fn absorb(&mut self, q: super::quadrature::Quadrature, disc: f64) {
        self.value += q.value;
        self.quad_error += q.error;
        self.panels += q.panels;
        self.evaluations += q.evaluations;
        self.circle_discrepancy = self.circle_discrepancy.max(disc);
    }
}

/// The collar substitution `u = (1 - s)^{1-p}` maps `[s_start, 1]` onto
/// `[0, u_max]`; returns `(s, ds/du)` up to sign.
fn collar_substitution(u: f64, p: f64) -> (f64, f64) {
    let q = 1.0 - p;
    let depth = u.powf(1.0 / q);
    (1.0 - depth, u.powf(p / q) / q)
}

/// Integrates the directional derivative of f in direction `e` along the
/// plan: circles of the plan's interior radius on gamma1, and radius
/// `min((1 - s')^p, sigma) / 2` on the collar part, where `1 - s'` is the
/// collar depth.
pub fn integrate_i(
    f: &dyn HolomorphicOracle,
    plan: &PathPlan,
    direction: &[C64],
    domain: &Domain,
    opts: &IntegralOptions,
) -> Result<IntegralEstimate> {
    let z = &plan.z;
    let mut out = IntegralEstimate::default();
    for w in plan.gamma1.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut disc: f64 = 0.0;
        let q = integrate(
            |u| {
                let lam = a + (b - a) * u;
                let c = cauchy_directional_derivative(
                    f,
                    &cvec::scale(z, lam),
                    direction,
                    plan.circle_radius,
                    opts.circle_points,
                    Some(domain),
                )?;
                disc = disc.max(c.discrepancy);
                Ok(c.value * (b - a))
            },
            0.0,
            1.0,
            &opts.quad,
        )?;
        out.absorb(q, disc);
    }
    if let Some(c) = &plan.gamma2 {
        let p = plan.exponent;
        let u_max = (1.0 - c.s_start).powf(1.0 - p);
        let mut disc: f64 = 0.0;
        let q = integrate(
            |u| {
                let (s, jac) = collar_substitution(u, p);
                let lam = C64::new(1.0, 0.0) + c.mu * (1.0 - s);
                let est = cauchy_directional_derivative(
                    f,
                    &cvec::scale(z, lam),
                    direction,
                    plan.collar_radius(s),
                    opts.circle_points,
                    Some(domain),
                )?;
                disc = disc.max(est.discrepancy);
                // d lambda = -mu ds; reversing u cancels the sign of ds/du
                Ok(-est.value * c.mu * jac)
            },
            0.0,
            u_max,
            &opts.quad,
        )?;
        out.absorb(q, disc);
    }
    Ok(out)
}

/// Centers and radii of the derivative circles met along the plan, sampled
/// at `per_piece` parameters on each polyline segment and on the collar part.
pub fn derivative_circles(plan: &PathPlan, per_piece: usize) -> Vec<(CVec, f64)> {
    let mut out = Vec::new();
    let k = per_piece.max(2);
    for w in plan.gamma1.windows(2) {
        for j in 0..k {
            let lam = w[0] + (w[1] - w[0]) * (j as f64 / (k - 1) as f64);
            out.push((cvec::scale(&plan.z, lam), plan.circle_radius));
        }
    }
    if let Some(c) = &plan.gamma2 {
        for j in 0..k {
            let s = c.s_start + (1.0 - c.s_start) * (j as f64 / (k - 1) as f64);
            if plan.collar_radius(s) > 0.0 {
                out.push((plan.point(s), plan.collar_radius(s)));
            }
        }
    }
    out
}
