//! Points on the boundary: Newton projection, nearest points, distances,
//! ray casting and seeded boundary samples.

use rand::Rng;

use super::Domain;
use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};

const PROJECT_ITERS: usize = 200;

impl Domain {
    fn tiny_gradient(&self) -> f64 {
        1e-10 * self.scale() / self.diameter()
    }

    /// Newton iteration for `r = 0` along the gradient direction.
    pub fn project_to_boundary(&self, x: &[C64]) -> Result<CVec> {
        let tol = 1e-13 * self.scale();
        let cap = 0.25 * self.diameter();
        let mut w = x.to_vec();
        for it in 0..PROJECT_ITERS {
            let rv = self.r(&w);
            if rv.abs() <= tol {
                return Ok(w);
            }
            let g = self.gradient(&w);
            let gn2 = cvec::norm_sqr(&g);
            if gn2.sqrt() < self.tiny_gradient() {
                // critical point of r: nudge off it deterministically
                let k = it % (2 * self.dim());
                w = cvec::axpy(
                    &w,
                    C64::new(1e-3 * self.diameter(), 0.0),
                    &cvec::real_unit(self.dim(), k),
                );
                continue;
            }
            let mut step = -rv / gn2;
            let len = step.abs() * gn2.sqrt();
            if len > cap {
                step *= cap / len;
            }
            w = cvec::axpy(&w, C64::new(step, 0.0), &g);
        }
        Err(GleasonError::NotOnBoundary {
            residual: self.r(&w).abs(),
            tolerance: tol,
        })
    }

    /// Locally nearest boundary point: project, then slide along the boundary
    /// until `x - w` is normal.
    pub fn nearest_boundary_point(&self, x: &[C64]) -> Result<CVec> {
        let w0 = self.project_to_boundary(x)?;
        Ok(self.refine_nearest(x, w0))
    }

    fn refine_nearest(&self, x: &[C64], mut w: CVec) -> CVec {
        let mut best = cvec::dist(x, &w);
        let stop = 1e-13 * self.diameter();
        for _ in 0..80 {
            let g = self.gradient(&w);
            let Some(nh) = cvec::normalized(&g) else {
                break;
            };
            let d = cvec::sub(x, &w);
            let dn = cvec::real_dot(&d, &nh);
            let dt = cvec::axpy(&d, C64::new(-dn, 0.0), &nh);
            if cvec::norm(&dt) < stop {
                break;
            }
            let mut step = 1.0;
            let mut moved = false;
            while step > 1e-6 {
                let trial = cvec::axpy(&w, C64::new(step, 0.0), &dt);
                if let Ok(cand) = self.project_to_boundary(&trial) {
                    let dc = cvec::dist(x, &cand);
                    if dc < best {
                        best = dc;
                        w = cand;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        w
    }

    /// First sign change of r along `from + t dir`, `t in (0, 2 diam]`.
    pub fn ray_boundary(&self, from: &[C64], dir: &[C64]) -> Option<CVec> {
        let dir = cvec::normalized(dir)?;
        let at = |t: f64| cvec::axpy(from, C64::new(t, 0.0), &dir);
        let inside0 = self.r(from) < 0.0;
        let h = self.diameter() / 128.0;
        let mut lo = 0.0;
        let mut hi = None;
        let mut t = h;
        while t <= 2.0 * self.diameter() {
            if (self.r(&at(t)) < 0.0) != inside0 {
                hi = Some(t);
                break;
            }
            lo = t;
            t += h;
        }
        let mut hi = hi?;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (self.r(&at(mid)) < 0.0) == inside0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 * self.diameter() {
                break;
            }
        }
        Some(at(0.5 * (lo + hi)))
    }

    /// Signed distance to the boundary, positive inside.
    ///
    /// Exact for the ball and (inside) the annulus product; otherwise the
    /// minimum over refined candidates from a gradient projection and rays
    /// along the real coordinate axes.
    pub fn boundary_distance(&self, x: &[C64]) -> f64 {
        if let Some(d) = self.closed_form_distance(x) {
            return d;
        }
        let sign = if self.r(x) < 0.0 { 1.0 } else { -1.0 };
        let mut cands: Vec<CVec> = Vec::new();
        if let Ok(w) = self.project_to_boundary(x) {
            cands.push(w);
        }
        for k in 0..2 * self.dim() {
            let e = cvec::real_unit(self.dim(), k);
            for s in [1.0, -1.0] {
                if let Some(w) = self.ray_boundary(x, &cvec::scale_re(&e, s)) {
                    cands.push(w);
                }
            }
        }
        if cands.is_empty() {
            return sign * self.r(x).abs()
                / cvec::norm(&self.gradient(x)).max(self.tiny_gradient());
        }
        cands.sort_by(|a, b| cvec::dist(x, a).total_cmp(&cvec::dist(x, b)));
        let best = cands
            .into_iter()
            .take(2)
            .map(|w| cvec::dist(x, &self.refine_nearest(x, w)))
            .fold(f64::INFINITY, f64::min);
        sign * best
    }

    /// Seeded boundary samples: alternately rays from the interior seed in
    /// uniformly random directions and nearest-point projections of uniform
    /// points of the bounding box.
    pub fn sample_boundary<R: Rng>(&self, count: usize, rng: &mut R) -> Vec<CVec> {
        let n = self.dim();
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count && attempts < 20 * count + 100 {
            attempts += 1;
            let w = if out.len() % 2 == 0 {
                let dir: CVec = (0..n).map(|_| C64::new(gauss(rng), gauss(rng))).collect();
                self.ray_boundary(self.seed(), &dir)
            } else {
                let p: CVec = (0..n)
                    .map(|j| {
                        let (a, b) = self.bbox()[2 * j];
                        let (c, d) = self.bbox()[2 * j + 1];
                        C64::new(rng.gen_range(a..b), rng.gen_range(c..d))
                    })
                    .collect();
                self.nearest_boundary_point(&p).ok()
            };
            if let Some(w) = w {
                if self.r(&w).abs() < self.boundary_tolerance() {
                    out.push(w);
                } else if let Ok(w) = self.project_to_boundary(&w) {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// Standard normal deviate by Box-Muller.
pub(crate) fn gauss<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}
