//! Finite cover of the boundary by patches W_k, the collar fraction sigma,
//! the collar V and the clearance constant A.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::frame::{inner_normal, project_onto_line};
use super::lemma1::{probe_depths, probes_pass, Probe};
use super::Domain;
use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoverParams {
    pub boundary_samples: usize,
    /// Maximum number of patches.
    pub budget: usize,
    /// Lower bound on `Re <pi_w(n_k), n_w>` inside patch k.
    pub min_quality: f64,
    /// Largest collar fraction tried, as a multiple of the domain diameter.
    pub sigma_max: f64,
    /// Smallest collar fraction accepted, as a multiple of the diameter.
    pub sigma_floor: f64,
    /// In-patch boundary points used for the sigma bisection.
    pub verify_points: usize,
    pub seed: u64,
    /// Strict covers fail on any unverifiable or uncoverable patch; lenient
    /// covers flag them and carry on.
    pub strict: bool,
    /// Lenient covers flag patches whose sigma falls below this fraction of
    /// `sigma_max` instead of letting them shrink the global sigma.
    pub sigma_accept: f64,
    /// Centers placed before the greedy farthest-point phase.
    pub initial_centers: Vec<CVec>,
}

impl Default for CoverParams {
    fn default() -> Self {
        CoverParams {
            boundary_samples: 2000,
            budget: 64,
            min_quality: 0.25,
            sigma_max: 0.06,
            sigma_floor: 1e-5,
            verify_points: 24,
            seed: 0x5eed,
            strict: true,
            sigma_accept: 0.0,
            initial_centers: Vec::new(),
        }
    }
}

impl CoverParams {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn lenient(mut self) -> Self {
        self.strict = false;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Patch {
    pub center: CVec,
    pub center_normal: CVec,
    pub radius: f64,
    pub sigma: f64,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollarCover {
    pub patches: Vec<Patch>,
    /// Global collar fraction: the minimum over verified patches.
    pub sigma: f64,
    /// Clearance A: sampled distance from the complement of V to the boundary.
    pub clearance: f64,
    pub exponent: f64,
    pub samples: Vec<CVec>,
    /// Boundary samples that ended up in no patch (lenient covers only).
    pub uncovered: usize,
    diam: f64,
}

/// A point of the collar with its boundary foot and parameter:
/// `z = w + (1 - s) pi_w(n_k)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CollarPoint {
    pub patch: usize,
    pub w: CVec,
    pub center: CVec,
    pub s: f64,
    /// `pi_w(n_k)`
    pub direction: CVec,
    pub residual: f64,
}

fn quality(center_normal: &[C64], w: &[C64], nw: &[C64]) -> f64 {
    match project_onto_line(center_normal, w) {
        Ok(p) => cvec::real_dot(&p, nw),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Orthonormal basis of the real tangent plane `{v : Re <v, g> = 0}`.
fn real_tangent_basis(g: &[C64]) -> Vec<CVec> {
    let n = g.len();
    let gh = cvec::normalized(g).expect("nonzero gradient");
    let mut basis = vec![gh];
    let mut out = Vec::with_capacity(2 * n - 1);
    let mut cands: Vec<(f64, usize, CVec)> = (0..2 * n)
        .map(|k| {
            let e = cvec::real_unit(n, k);
            let r = cvec::axpy(&e, C64::new(-cvec::real_dot(&e, &basis[0]), 0.0), &basis[0]);
            (cvec::norm(&r), k, e)
        })
        .collect();
    // drop the coordinate most aligned with the normal
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    cands.truncate(2 * n - 1);
    cands.sort_by_key(|c| c.1);
    for (_, _, e) in cands {
        let mut r = e;
        for b in &basis {
            r = cvec::axpy(&r, C64::new(-cvec::real_dot(&r, b), 0.0), b);
        }
        let t = cvec::normalized(&r).expect("independent coordinate");
        basis.push(t.clone());
        out.push(t);
    }
    out
}

struct Chart<'a> {
    domain: &'a Domain,
    base: CVec,
    normal: CVec,
    tangents: Vec<CVec>,
}

impl Chart<'_> {
    /// Boundary point over `base + sum tau_m t_m`, moved along the fixed normal.
    fn point(&self, tau: &[f64]) -> Option<CVec> {
        let mut q = self.base.clone();
        for (t, v) in tau.iter().zip(&self.tangents) {
            q = cvec::axpy(&q, C64::new(*t, 0.0), v);
        }
        let d = self.domain;
        let mut h = 0.0;
        let tol = 1e-15 * d.scale();
        for _ in 0..60 {
            let x = cvec::axpy(&q, C64::new(h, 0.0), &self.normal);
            let rv = d.r(&x);
            if rv.abs() <= tol {
                return Some(x);
            }
            let slope = cvec::real_dot(&d.gradient(&x), &self.normal);
            if slope.abs() < 1e-12 * d.scale() / d.diameter() {
                return None;
            }
            let dh = -rv / slope;
            h += dh.clamp(-0.1 * d.diameter(), 0.1 * d.diameter());
            if dh.abs() < 1e-16 * d.diameter() {
                return Some(cvec::axpy(&q, C64::new(h, 0.0), &self.normal));
            }
        }
        None
    }
}

const NEWTON_ITERS: usize = 50;

impl CollarCover {
    pub fn diameter(&self) -> f64 {
        self.diam
    }

    /// Indices of boundary samples lying in patch k.
    pub fn members(&self, k: usize) -> Vec<usize> {
        let p = &self.patches[k];
        (0..self.samples.len())
            .filter(|i| cvec::dist(&self.samples[*i], &p.center) < p.radius)
            .collect()
    }

    pub fn unverified(&self) -> usize {
        self.patches.iter().filter(|p| !p.verified).count()
    }

    /// `F_{w_k}(w, s) = w + (1 - s) pi_w(n_{w_k})`.
    pub fn chart(&self, k: usize, w: &[C64], s: f64) -> Result<CVec> {
        let dir = project_onto_line(&self.patches[k].center_normal, w)?;
        Ok(cvec::axpy(w, C64::new(1.0 - s, 0.0), &dir))
    }

    /// Inverts the chart of the first patch (in index order) whose collar
    /// contains z. `None` means z is not in the collar V.
    pub fn membership(&self, domain: &Domain, z: &[C64]) -> Result<Option<CollarPoint>> {
        let d = domain.boundary_distance(z);
        let tol = 1e-9 * self.diam;
        if d > 0.5 * self.sigma + tol || d < -tol {
            return Ok(None);
        }
        let foot = domain.nearest_boundary_point(z)?;
        let mut diverged = None;
        for k in 0..self.patches.len() {
            let p = &self.patches[k];
            if cvec::dist(&foot, &p.center) > p.radius + self.sigma {
                continue;
            }
            match self.solve_in_patch(domain, k, z, &foot) {
                Ok(Some(cp)) => return Ok(Some(cp)),
                Ok(None) => {}
                Err(e) => diverged = Some(e),
            }
        }
        match diverged {
            Some(e) => Err(e),
            None => Ok(None),
        }
    }

    /// Chart inversion restricted to patch k.
    pub fn membership_in_patch(
        &self,
        domain: &Domain,
        k: usize,
        z: &[C64],
    ) -> Result<Option<CollarPoint>> {
        if k >= self.patches.len() {
            return Err(GleasonError::InvalidInput(format!("no patch {k}")));
        }
        let foot = domain.nearest_boundary_point(z)?;
        self.solve_in_patch(domain, k, z, &foot)
    }

    fn solve_in_patch(
        &self,
        domain: &Domain,
        k: usize,
        z: &[C64],
        foot: &[C64],
    ) -> Result<Option<CollarPoint>> {
        let patch = &self.patches[k];
        let g = domain.gradient(foot);
        let chart = Chart {
            domain,
            base: foot.to_vec(),
            normal: cvec::normalized(&g).ok_or(GleasonError::GradientVanishes {
                at: cvec::fmt_point(foot),
            })?,
            tangents: real_tangent_basis(&g),
        };
        let n = z.len();
        let m = 2 * n;
        let eval = |x: &[f64]| -> Option<(CVec, CVec, Vec<f64>)> {
            let w = chart.point(&x[..m - 1])?;
            let dir = project_onto_line(&patch.center_normal, &w).ok()?;
            let v = cvec::axpy(&w, C64::new(1.0 - x[m - 1], 0.0), &dir);
            let res = cvec::sub(&v, z);
            Some((w, dir, (0..m).map(|i| cvec::real_coord(&res, i)).collect()))
        };
        let nrm = |f: &[f64]| f.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dir0 = project_onto_line(&patch.center_normal, foot)?;
        let dd = cvec::norm_sqr(&dir0);
        if dd < 1e-24 {
            return Ok(None);
        }
        let mut x = vec![0.0; m];
        x[m - 1] = 1.0 - cvec::real_dot(&cvec::sub(z, foot), &dir0) / dd;
        let Some(mut cur) = eval(&x) else {
            return Ok(None);
        };
        let target = 1e-13 * self.diam;
        let h = 1e-7 * self.diam;
        let mut it = 0;
        while nrm(&cur.2) > target && it < NEWTON_ITERS {
            it += 1;
            let mut jac = DMatrix::<f64>::zeros(m, m);
            for j in 0..m {
                let mut xp = x.clone();
                xp[j] += h;
                let Some(fp) = eval(&xp) else { return Ok(None) };
                for i in 0..m {
                    jac[(i, j)] = (fp.2[i] - cur.2[i]) / h;
                }
            }
            let rhs = DVector::from_iterator(m, cur.2.iter().map(|v| -v));
            let Some(dx) = jac.lu().solve(&rhs) else {
                break;
            };
            let f0 = nrm(&cur.2);
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda > 1e-4 {
                let xt: Vec<f64> = x
                    .iter()
                    .zip(dx.iter())
                    .map(|(a, b)| a + lambda * b)
                    .collect();
                if let Some(ft) = eval(&xt) {
                    if nrm(&ft.2) < f0 {
                        x = xt;
                        cur = ft;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let residual = nrm(&cur.2);
        if residual > 1e-10 * self.diam {
            return Err(GleasonError::NewtonDivergence {
                patch: k,
                iterations: it,
            });
        }
        let mut s = x[m - 1];
        let (w, dir, _) = cur;
        if s > 1.0 + 1e-9 || s <= 1.0 - 0.5 * self.sigma {
            return Ok(None);
        }
        if cvec::dist(&w, &patch.center) >= patch.radius {
            return Ok(None);
        }
        if s > 1.0 {
            s = 1.0;
        }
        Ok(Some(CollarPoint {
            patch: k,
            w,
            center: patch.center.clone(),
            s,
            direction: dir,
            residual,
        }))
    }
}

/// Builds the collar cover: greedy farthest-point centers over a seeded
/// boundary sample, patch radii limited by projected-normal quality, and per
/// patch the largest sigma passing the deterministic membership probes.
pub fn collar_cover(domain: &Domain, params: &CoverParams) -> Result<CollarCover> {
    if params.budget == 0 {
        return Err(GleasonError::CoverFailure("patch budget is zero".into()));
    }
    let diam = domain.diameter();
    let sigma_max = params.sigma_max * diam;
    let sigma_floor = params.sigma_floor * diam;
    let p = domain.collar_exponent();
    let depths = probe_depths(sigma_max);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let samples = domain.sample_boundary(params.boundary_samples, &mut rng);
    if samples.is_empty() {
        return Err(GleasonError::CoverFailure("no boundary samples".into()));
    }
    let normals: Vec<CVec> = samples
        .iter()
        .map(|w| inner_normal(domain, w))
        .collect::<Result<_>>()?;

    let mut centers: Vec<(CVec, CVec)> = Vec::new();
    for c in &params.initial_centers {
        let w = domain.project_to_boundary(&domain.from_original(c))?;
        let nw = inner_normal(domain, &w)?;
        centers.push((w, nw));
    }
    let mut queued = centers.len();
    let mut covered = vec![false; samples.len()];
    let mut dead = vec![false; samples.len()];
    let mut min_dist = vec![f64::INFINITY; samples.len()];
    let mut patches: Vec<Patch> = Vec::new();

    loop {
        let (c, nc) = if queued > 0 {
            queued -= 1;
            centers[centers.len() - 1 - queued].clone()
        } else {
            let mut best: Option<usize> = None;
            for i in 0..samples.len() {
                if covered[i] || dead[i] {
                    continue;
                }
                if best.map_or(true, |b| min_dist[i] > min_dist[b]) {
                    best = Some(i);
                }
            }
            let Some(i) = best else { break };
            (samples[i].clone(), normals[i].clone())
        };
        if patches.len() == params.budget {
            if params.strict {
                let left = covered.iter().filter(|c| !**c).count();
                return Err(GleasonError::CoverFailure(format!(
                    "{left} boundary samples uncovered after {} patches",
                    params.budget
                )));
            }
            break;
        }
        for (i, w) in samples.iter().enumerate() {
            min_dist[i] = min_dist[i].min(cvec::dist(w, &c));
        }

        let mut order: Vec<(f64, usize)> = samples
            .iter()
            .enumerate()
            .map(|(i, w)| (cvec::dist(w, &c), i))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut radius = 0.5 * diam;
        let mut last_good = 0.0;
        for &(d, i) in &order {
            if d >= radius {
                break;
            }
            if quality(&nc, &samples[i], &normals[i]) < params.min_quality {
                radius = 0.5 * (last_good + d);
                break;
            }
            last_good = d;
        }
        if quality(&nc, &c, &nc) < params.min_quality || radius <= 0.0 {
            if params.strict {
                return Err(GleasonError::CoverFailure(format!(
                    "projected normal degenerates at {}",
                    cvec::fmt_point(&domain.to_original(&c))
                )));
            }
            for &(d, i) in &order {
                if d < 1e-12 * diam {
                    dead[i] = true;
                }
            }
            continue;
        }

        let probes_for = |radius: f64| -> Vec<Probe> {
            let inside: Vec<usize> = order
                .iter()
                .take_while(|(d, _)| *d < radius)
                .map(|(_, i)| *i)
                .collect();
            let mut pick = vec![c.clone()];
            let want = params.verify_points.max(1);
            for j in 0..want.min(inside.len()) {
                let idx = if want >= inside.len() {
                    j
                } else {
                    (j * (inside.len() - 1)) / (want - 1).max(1)
                };
                pick.push(samples[inside[idx]].clone());
            }
            pick.into_iter().map(|z| Probe::new(domain, z)).collect()
        };
        let find_sigma = |probes: &[Probe]| -> Option<f64> {
            if probes_pass(domain, &nc, probes, &depths, sigma_max, p) {
                return Some(sigma_max);
            }
            if !probes_pass(domain, &nc, probes, &depths, sigma_floor, p) {
                return None;
            }
            let (mut lo, mut hi) = (sigma_floor, sigma_max);
            for _ in 0..40 {
                let mid = (lo * hi).sqrt();
                if probes_pass(domain, &nc, probes, &depths, mid, p) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi / lo < 1.001 {
                    break;
                }
            }
            Some(lo)
        };

        let full_radius = radius;
        let mut found = None;
        for _ in 0..6 {
            if let Some(s) = find_sigma(&probes_for(radius)) {
                found = Some(s);
                break;
            }
            radius *= 0.5;
        }
        let accept = if params.strict {
            0.0
        } else {
            params.sigma_accept * sigma_max
        };
        let patch = match found {
            Some(s) if s >= accept => Patch {
                center: c.clone(),
                center_normal: nc.clone(),
                radius,
                sigma: 0.9 * s,
                verified: true,
            },
            None if params.strict => {
                return Err(GleasonError::CoverFailure(format!(
                    "membership probes fail for every collar fraction at {}",
                    cvec::fmt_point(&domain.to_original(&c))
                )));
            }
            Some(s) => Patch {
                center: c.clone(),
                center_normal: nc.clone(),
                radius,
                sigma: 0.9 * s,
                verified: false,
            },
            None => Patch {
                center: c.clone(),
                center_normal: nc.clone(),
                radius: full_radius,
                sigma: sigma_floor,
                verified: false,
            },
        };
        for &(d, i) in &order {
            if d >= patch.radius {
                break;
            }
            covered[i] = true;
        }
        patches.push(patch);
    }

    let sigma = patches
        .iter()
        .filter(|p| p.verified)
        .map(|p| p.sigma)
        .fold(f64::INFINITY, f64::min);
    let sigma = if sigma.is_finite() {
        sigma
    } else {
        sigma_floor
    };
    let uncovered = covered.iter().filter(|c| !**c).count();
    let mut cover = CollarCover {
        patches,
        sigma,
        clearance: 0.0,
        exponent: p,
        samples,
        uncovered,
        diam,
    };
    cover.clearance = clearance(domain, &cover, &normals)?;
    Ok(cover)
}

const CLEARANCE_SAFETY: f64 = 0.9;

/// Minimum distance to the boundary over sampled points of the complement
/// of V: first points outside V along inner normals, the inner edge of every
/// patch collar, and the origin.
fn clearance(domain: &Domain, cover: &CollarCover, normals: &[CVec]) -> Result<f64> {
    let not_in_v =
        |x: &[C64]| domain.contains(x) && matches!(cover.membership(domain, x), Ok(None));
    let mut best = f64::INFINITY;
    let zero = cvec::zeros(domain.dim());
    if not_in_v(&zero) {
        best = best.min(domain.boundary_distance(&zero));
    }
    let stride = (cover.samples.len() / 300).max(1);
    for (w, nw) in cover.samples.iter().zip(normals).step_by(stride) {
        for j in 1..=12 {
            let x = cvec::axpy(w, C64::new(0.5 * cover.sigma * j as f64 / 8.0, 0.0), nw);
            if not_in_v(&x) {
                best = best.min(domain.boundary_distance(&x));
                break;
            }
        }
    }
    for k in 0..cover.patches.len() {
        let members = cover.members(k);
        let stride = (members.len() / 40).max(1);
        for &i in members.iter().step_by(stride) {
            let w = &cover.samples[i];
            // counted even when another patch's collar reaches deeper: the
            // interior part of a collar curve ends at these points
            if let Ok(x) = cover.chart(k, w, 1.0 - 0.5 * cover.sigma) {
                if domain.contains(&x) {
                    best = best.min(domain.boundary_distance(&x));
                }
            }
        }
    }
    if !(best.is_finite() && best > 0.0) {
        return Err(GleasonError::CoverFailure(format!(
            "clearance is not positive ({best:e})"
        )));
    }
    Ok(CLEARANCE_SAFETY * best)
}

/// Free-function form of [`CollarCover::membership`].
pub fn collar_membership(
    cover: &CollarCover,
    domain: &Domain,
    z: &[C64],
) -> Result<Option<CollarPoint>> {
    cover.membership(domain, z)
}
