use serde::{Deserialize, Serialize};

use super::plan::{plan_path, PathPlan, PlanKind, PlanOptions};
use crate::cvec::{self, C64};
use crate::geometry::{CollarCover, Domain};

/// Relative slack allowed on sampled clearance and speed checks.
const SAMPLE_SLACK: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathValidation {
    pub endpoint_error: f64,
    pub min_clearance: f64,
    pub min_clearance_gamma1: f64,
    pub max_speed: f64,
    pub collar_formula_residual: f64,
    pub loop_free: bool,
    /// `max_s |gamma_z(s) - gamma_z'(s)|` for the perturbed point, if replanned.
    pub continuity_deviation: Option<f64>,
    /// Deviation divided by `|eta|`.
    pub continuity_constant: Option<f64>,
    pub failures: Vec<String>,
}

impl PathValidation {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn segments_cross(a: C64, b: C64, c: C64, d: C64) -> bool {
    let cross = |u: C64, v: C64| u.re * v.im - u.im * v.re;
    let (r, s) = (b - a, d - c);
    let den = cross(r, s);
    if den.abs() < 1e-300 {
        return false;
    }
    let t = cross(c - a, s) / den;
    let u = cross(c - a, r) / den;
    let eps = 1e-12;
    t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps
}

/// Samples the plan on `samples + 1` parameters and checks endpoints,
/// membership, clearance per part, the speed bound, loop-freeness and the
/// collar formula. With `eta`, also replans at `z + eta` and reports the
/// sup deviation of the two curves.
pub fn validate_path(
    domain: &Domain,
    cover: &CollarCover,
    plan: &PathPlan,
    samples: usize,
    eta: Option<&[C64]>,
) -> PathValidation {
    let mut failures = Vec::new();
    let endpoint_error = plan.gamma(0.0).norm().max((plan.gamma(1.0) - 1.0).norm());
    if endpoint_error > 1e-12 {
        failures.push(format!("endpoint error {endpoint_error:e}"));
    }
    let mut min_c = f64::INFINITY;
    let mut min_c1 = f64::INFINITY;
    let mut max_speed: f64 = 0.0;
    let mut formula: f64 = 0.0;
    let s1 = plan.gamma1_end();
    let mut outside = None;
    for k in 0..=samples {
        let s = k as f64 / samples as f64;
        let x = plan.point(s);
        if domain.r(&x) > domain.boundary_tolerance() && outside.is_none() {
            outside = Some(s);
        }
        let d = domain.boundary_distance(&x);
        min_c = min_c.min(d);
        if s <= s1 {
            min_c1 = min_c1.min(d);
        }
        max_speed = max_speed.max(plan.gamma_prime(s.min(1.0 - 1e-15)).norm());
        if let Some(c) = &plan.gamma2 {
            if s >= c.s_start {
                let want = cvec::axpy(&plan.z, C64::new(1.0 - s, 0.0), &c.direction);
                formula = formula.max(cvec::dist(&x, &want));
            }
        }
    }
    if let Some(s) = outside {
        failures.push(format!("curve leaves the domain at s = {s}"));
    }
    let need = match plan.kind {
        PlanKind::Small => 0.0,
        _ => plan.required_clearance * (1.0 - SAMPLE_SLACK),
    };
    if min_c1 < need {
        failures.push(format!(
            "interior-part clearance {min_c1:e} below A = {:e}",
            plan.required_clearance
        ));
    }
    if max_speed > plan.m_bound * (1.0 + 1e-12) {
        failures.push(format!("speed {max_speed} exceeds M = {}", plan.m_bound));
    }
    if formula > 1e-10 {
        failures.push(format!("collar formula residual {formula:e}"));
    }
    let mut segs: Vec<(C64, C64)> = plan.gamma1.windows(2).map(|w| (w[0], w[1])).collect();
    if let Some(c) = &plan.gamma2 {
        segs.push((plan.gamma(c.s_start), C64::new(1.0, 0.0)));
    }
    let mut loop_free = true;
    for i in 0..segs.len() {
        for j in i + 2..segs.len() {
            if segments_cross(segs[i].0, segs[i].1, segs[j].0, segs[j].1) {
                loop_free = false;
            }
        }
    }
    if !loop_free {
        failures.push("curve intersects itself".into());
    }

    let (mut dev, mut lip) = (None, None);
    if let Some(eta) = eta {
        let z2 = cvec::add(&plan.z, eta);
        let opts = PlanOptions::default();
        match plan_path(domain, cover, &z2, &opts) {
            Ok(q) => {
                let m = (0..=samples)
                    .map(|k| {
                        let s = k as f64 / samples as f64;
                        (plan.gamma(s) - q.gamma(s)).norm()
                    })
                    .fold(0.0, f64::max);
                dev = Some(m);
                lip = Some(m / cvec::norm(eta));
            }
            Err(e) => failures.push(format!("replanning at perturbed point failed: {e}")),
        }
    }
    PathValidation {
        endpoint_error,
        min_clearance: min_c,
        min_clearance_gamma1: min_c1,
        max_speed,
        collar_formula_residual: formula,
        loop_free,
        continuity_deviation: dev,
        continuity_constant: lip,
        failures,
    }
}
