use serde::{Deserialize, Serialize};

use super::raster::{raster_path, SafeSet};
use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};
use crate::geometry::{inner_normal, project_onto_line, CollarCover, CollarPoint, Domain};

/// `|z|` below this fraction of the diameter uses the straight segment and
/// a single ball around the origin.
pub const SMALL_POINT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    Interior,
    Collar,
    /// `|z|` tiny: the segment [0, 1] inside a ball around the origin.
    Small,
}

/// The collar part `gamma2(s) = 1 + (1 - s) mu` on `[1 - sigma/2, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollarPart {
    pub patch: usize,
    pub w: CVec,
    pub center: CVec,
    /// Collar parameter of z itself.
    pub s_z: f64,
    pub mu: C64,
    /// `pi_w(n_{w_k}) = mu z`
    pub direction: CVec,
    pub s_start: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPlan {
    pub z: CVec,
    pub kind: PlanKind,
    /// Polyline from 0 to 1 (interior) or to `1 + (sigma/2) mu` (collar).
    pub gamma1: Vec<C64>,
    pub gamma2: Option<CollarPart>,
    /// Sampled minimum of `d(gamma(s) z)` over the whole curve.
    pub clearance: f64,
    pub clearance_gamma1: f64,
    /// Required clearance A of the interior part.
    pub required_clearance: f64,
    pub deriv_bound: f64,
    /// `M = 2 * total length`.
    pub m_bound: f64,
    /// Derivative-circle radius on the interior part.
    pub circle_radius: f64,
    pub exponent: f64,
    pub sigma: f64,
    /// Parameter values of the gamma1 nodes; the last is `1 - sigma/2` for
    /// collar plans and 1 otherwise.
    pub breaks: Vec<f64>,
}

impl PathPlan {
    pub fn gamma1_end(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn gamma1_length(&self) -> f64 {
        self.gamma1.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    pub fn length(&self) -> f64 {
        self.gamma1_length()
            + self
                .gamma2
                .as_ref()
                .map_or(0.0, |c| (1.0 - c.s_start) * c.mu.norm())
    }

    fn segment_at(&self, s: f64) -> usize {
        let k = self.breaks.partition_point(|b| *b <= s);
        k.clamp(1, self.breaks.len() - 1) - 1
    }

    pub fn gamma(&self, s: f64) -> C64 {
        if let Some(c) = &self.gamma2 {
            if s >= c.s_start {
                return C64::new(1.0, 0.0) + c.mu * (1.0 - s);
            }
        }
        let k = self.segment_at(s);
        let (b0, b1) = (self.breaks[k], self.breaks[k + 1]);
        let t = (s - b0) / (b1 - b0);
        if t >= 1.0 {
            return self.gamma1[k + 1];
        }
        self.gamma1[k] + (self.gamma1[k + 1] - self.gamma1[k]) * t
    }

    pub fn gamma_prime(&self, s: f64) -> C64 {
        if let Some(c) = &self.gamma2 {
            if s >= c.s_start {
                return -c.mu;
            }
        }
        let k = self.segment_at(s);
        (self.gamma1[k + 1] - self.gamma1[k]) / (self.breaks[k + 1] - self.breaks[k])
    }

    /// `gamma(s) z`
    pub fn point(&self, s: f64) -> CVec {
        cvec::scale(&self.z, self.gamma(s))
    }

    /// Derivative-circle radius on the collar part at parameter s:
    /// half of `(1 - s')^p`, capped by sigma, where `1 - s'` is the collar
    /// depth of `gamma(s) z`.
    pub fn collar_radius(&self, s: f64) -> f64 {
        let c = self.gamma2.as_ref().expect("collar plan");
        let depth = (1.0 - c.s_z) + (1.0 - s);
        0.5 * depth.powf(self.exponent).min(self.sigma)
    }
}

/// `mu_z = <pi_w(n_{w_k}), z> / <z, z>`, required to reproduce the projection.
pub fn mu(z: &[C64], w: &[C64], w_k: &[C64], domain: &Domain) -> Result<C64> {
    let n = inner_normal(domain, w_k)?;
    let p = project_onto_line(&n, w)?;
    mu_from_direction(z, &p)
}

pub(crate) fn mu_from_direction(z: &[C64], p: &[C64]) -> Result<C64> {
    let zz = cvec::norm_sqr(z);
    if zz.sqrt() < 1e-14 {
        return Err(GleasonError::ZeroDirection);
    }
    let m = cvec::herm(p, z) / zz;
    let residual = cvec::dist(&cvec::scale(z, m), p);
    if residual > 1e-8 * cvec::norm(p).max(1.0) {
        return Err(GleasonError::NotCollinear { residual });
    }
    Ok(m)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlanOptions {
    /// Skip the straight-segment shortcut.
    pub force_raster: bool,
    /// Route the interior part through these lambda values.
    pub waypoints: Vec<C64>,
    /// Initial raster size; doubled up to 4x when no path is found.
    pub resolution: usize,
    /// Collar data to use instead of a membership query.
    pub collar: Option<CollarPoint>,
    /// Treat the point as outside the collar without a membership query.
    pub assume_interior: bool,
}

struct LineSafety<'a> {
    domain: &'a Domain,
    z: &'a [C64],
    need: f64,
    znorm: f64,
}

impl LineSafety<'_> {
    fn dist(&self, l: C64) -> f64 {
        self.domain.boundary_distance(&cvec::scale(self.z, l))
    }

    /// Minimum sampled distance along the segment, stopping early once it
    /// drops below the requirement. Convex domains only need the endpoints
    /// (distance to the boundary is concave there); otherwise the segment is
    /// swept with steps set by the current slack.
    fn segment_min(&self, a: C64, b: C64) -> f64 {
        let da = self.dist(a);
        let db = self.dist(b);
        if self.domain.is_convex() || da < self.need || db < self.need {
            return da.min(db);
        }
        let len = (b - a).norm() * self.znorm;
        if len == 0.0 {
            return da;
        }
        let floor = 0.02 * self.need.max(1e-12 * self.domain.diameter());
        let mut t = 0.0;
        let mut lo = da.min(db);
        while t < 1.0 {
            let d = self.dist(a + (b - a) * t);
            lo = lo.min(d);
            if d < self.need {
                return d;
            }
            t += (d - self.need).max(floor) / len;
        }
        lo
    }
}

impl SafeSet for LineSafety<'_> {
    fn slack(&self, l: C64) -> f64 {
        self.dist(l) - self.need
    }

    fn segment_safe(&self, a: C64, b: C64) -> bool {
        self.segment_min(a, b) >= self.need
    }

    fn stretch(&self) -> f64 {
        self.znorm
    }
}

fn parametrize(nodes: &[C64], end: f64) -> Vec<f64> {
    let lens: Vec<f64> = nodes.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let total: f64 = lens.iter().sum();
    let mut breaks = vec![0.0];
    let mut acc = 0.0;
    for (i, l) in lens.iter().enumerate() {
        acc += l;
        breaks.push(if i + 1 == lens.len() {
            end
        } else {
            end * acc / total
        });
    }
    breaks
}

/// Builds `gamma_z`. Outside the collar the whole curve is a safe polyline
/// from 0 to 1; in the collar a safe polyline reaches `1 + (sigma/2) mu` and
/// the exact segment `1 + (1 - s) mu` finishes at 1.
pub fn plan_path(
    domain: &Domain,
    cover: &CollarCover,
    z: &[C64],
    opts: &PlanOptions,
) -> Result<PathPlan> {
    if z.len() != domain.dim() {
        return Err(GleasonError::DimensionMismatch {
            expected: domain.dim(),
            got: z.len(),
        });
    }
    let znorm = cvec::norm(z);
    if znorm == 0.0 {
        return Err(GleasonError::ZeroDirection);
    }
    let sigma = cover.sigma;
    let a = cover.clearance;
    let p = domain.collar_exponent();

    if znorm < SMALL_POINT * domain.diameter() {
        let d0 = domain.boundary_distance(&cvec::zeros(z.len()));
        let radius = 0.5 * (d0 - znorm);
        if radius <= 0.0 {
            return Err(GleasonError::PointOutsideDomain {
                at: cvec::fmt_point(&domain.to_original(&cvec::zeros(z.len()))),
            });
        }
        return Ok(PathPlan {
            z: z.to_vec(),
            kind: PlanKind::Small,
            gamma1: vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            gamma2: None,
            clearance: d0 - znorm,
            clearance_gamma1: d0 - znorm,
            required_clearance: 0.0,
            deriv_bound: 1.0,
            m_bound: 2.0,
            circle_radius: radius,
            exponent: p,
            sigma,
            breaks: vec![0.0, 1.0],
        });
    }

    let collar = match (&opts.collar, opts.assume_interior) {
        (Some(cp), _) => Some(cp.clone()),
        (None, true) => None,
        (None, false) => cover.membership(domain, z)?,
    };
    let (end, gamma2) = match &collar {
        None => (C64::new(1.0, 0.0), None),
        Some(cp) => {
            let m = mu_from_direction(z, &cp.direction)?;
            let part = CollarPart {
                patch: cp.patch,
                w: cp.w.clone(),
                center: cp.center.clone(),
                s_z: cp.s,
                mu: m,
                direction: cp.direction.clone(),
                s_start: 1.0 - 0.5 * sigma,
            };
            (C64::new(1.0, 0.0) + m * (0.5 * sigma), Some(part))
        }
    };

    let safety = LineSafety {
        domain,
        z,
        need: a,
        znorm,
    };
    let origin = C64::new(0.0, 0.0);
    let d_end = safety.dist(end);
    if d_end < a {
        return Err(GleasonError::NoSafePath {
            endpoint: cvec::fmt_point(&domain.to_original(&cvec::scale(z, end))),
            clearance: d_end,
        });
    }
    let nodes = if !opts.waypoints.is_empty() {
        let mut nodes = vec![origin];
        nodes.extend(opts.waypoints.iter().copied());
        nodes.push(end);
        for w in nodes.windows(2) {
            if !safety.segment_safe(w[0], w[1]) {
                return Err(GleasonError::NoSafePath {
                    endpoint: format!("waypoint segment {} -> {}", w[0], w[1]),
                    clearance: safety.segment_min(w[0], w[1]),
                });
            }
        }
        nodes
    } else if !opts.force_raster && safety.segment_safe(origin, end) {
        vec![origin, end]
    } else {
        let corner = domain
            .bbox_corners()
            .iter()
            .map(|c| cvec::norm(c))
            .fold(0.0, f64::max);
        let half = (corner / znorm).max(end.norm() * 1.05);
        let base = if opts.resolution == 0 {
            256
        } else {
            opts.resolution
        };
        let mut found = None;
        for m in [base, 2 * base, 4 * base] {
            if let Some(path) = raster_path(&safety, origin, end, half, m) {
                found = Some(path);
                break;
            }
        }
        found.ok_or_else(|| GleasonError::NoSafePath {
            endpoint: cvec::fmt_point(&domain.to_original(&cvec::scale(z, end))),
            clearance: d_end,
        })?
    };

    let s1 = if gamma2.is_some() {
        1.0 - 0.5 * sigma
    } else {
        1.0
    };
    let breaks = parametrize(&nodes, s1);
    let clearance1 = nodes
        .windows(2)
        .map(|w| safety.segment_min(w[0], w[1]))
        .fold(f64::INFINITY, f64::min);
    let mut plan = PathPlan {
        z: z.to_vec(),
        kind: if gamma2.is_some() {
            PlanKind::Collar
        } else {
            PlanKind::Interior
        },
        gamma1: nodes,
        gamma2,
        clearance: clearance1,
        clearance_gamma1: clearance1,
        required_clearance: a,
        deriv_bound: 0.0,
        m_bound: 0.0,
        circle_radius: 0.5 * a,
        exponent: p,
        sigma,
        breaks,
    };
    if plan.gamma2.is_some() {
        // gamma2 walks out towards the boundary and ends at z
        plan.clearance = plan.clearance.min(safety.dist(C64::new(1.0, 0.0)).max(0.0));
    }
    let speed1 = plan.gamma1_length() / s1;
    let speed2 = plan.gamma2.as_ref().map_or(0.0, |c| c.mu.norm());
    plan.deriv_bound = speed1.max(speed2);
    plan.m_bound = 2.0 * plan.length();
    Ok(plan)
}
