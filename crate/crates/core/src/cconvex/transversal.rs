use serde::{Deserialize, Serialize};

use crate::cvec::{self, C64};
use crate::error::{GleasonError, Result};
use crate::geometry::Domain;

use super::slice::{slice, SliceRegion};

/// Crossings are refined until `|r| < CROSSING_TOLERANCE`.
pub const CROSSING_TOLERANCE: f64 = 1e-10;

/// Relative defect below which a crossing counts as a complex tangency.
pub const TANGENCY_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub lambda: C64,
    /// `|Σ_j ∂r/∂z_j(w) b_j|`
    pub defect: f64,
    /// Euclidean norm of the real gradient at the crossing.
    pub gradient_norm: f64,
}

impl Crossing {
    pub fn is_tangential(&self) -> bool {
        self.defect <= TANGENCY_THRESHOLD * self.gradient_norm
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalityReport {
    pub crossings: usize,
    pub min_defect: f64,
    /// Crossing attaining the smallest relative defect.
    pub worst: Crossing,
    pub transversal: bool,
}

fn crossing(domain: &Domain, region: &SliceRegion, lambda: C64) -> Crossing {
    let w = region.point(lambda);
    let dz = domain.complex_gradient(&w);
    let defect = dz
        .iter()
        .zip(&region.direction)
        .map(|(d, b)| d * b)
        .sum::<C64>()
        .norm();
    Crossing {
        lambda,
        defect,
        gradient_norm: cvec::norm(&domain.gradient(&w)),
    }
}

/// Bisection on the segment `[p, q]` of the λ-plane, `p` inside and `q`
/// outside.
fn bisect(domain: &Domain, region: &SliceRegion, mut p: C64, mut q: C64) -> C64 {
    for _ in 0..200 {
        let mid = 0.5 * (p + q);
        let v = domain.r(&region.point(mid));
        if v.abs() < CROSSING_TOLERANCE || (p - q).norm() < 1e-16 * (1.0 + mid.norm()) {
            return mid;
        }
        if v < 0.0 {
            p = mid;
        } else {
            q = mid;
        }
    }
    0.5 * (p + q)
}

/// Local minimum of `φ(λ) = r(a + λb)` by steepest descent with
/// backtracking, from the lowest grid node. Used when the line does not
/// cross the boundary but may touch it.
fn touch_point(domain: &Domain, region: &SliceRegion) -> C64 {
    let m = region.resolution;
    let phi = |l: C64| domain.r(&region.point(l));
    let mut best = region.node(0, 0);
    for k in 0..m * m {
        let l = region.node(k % m, k / m);
        if phi(l) < phi(best) {
            best = l;
        }
    }
    let b = &region.direction;
    let ib: Vec<C64> = b.iter().map(|x| x * C64::i()).collect();
    let mut step = region.step;
    for _ in 0..500 {
        let g = domain.gradient(&region.point(best));
        let grad = C64::new(cvec::real_dot(&g, b), cvec::real_dot(&g, &ib));
        if grad.norm() < 1e-15 {
            break;
        }
        let dir = -grad / grad.norm();
        let f0 = phi(best);
        let mut t = step;
        while t > 1e-18 && phi(best + t * dir) >= f0 {
            t *= 0.5;
        }
        if t <= 1e-18 {
            break;
        }
        best += t * dir;
        step = 2.0 * t;
    }
    best
}

/// Boundary crossings of the raster slice, refined from every edge of the
/// grid whose endpoints differ in the mask. A slice without sign changes
/// is searched for a touch point where `|r| < CROSSING_TOLERANCE`.
pub fn crossings(domain: &Domain, region: &SliceRegion) -> Result<Vec<Crossing>> {
    let m = region.resolution;
    let mut found = Vec::new();
    for j in 0..m {
        for i in 0..m {
            let here = region.inside(i, j);
            for (x, y) in [(i + 1, j), (i, j + 1)] {
                if x >= m || y >= m || region.inside(x, y) == here {
                    continue;
                }
                let (p, q) = if here {
                    (region.node(i, j), region.node(x, y))
                } else {
                    (region.node(x, y), region.node(i, j))
                };
                found.push(crossing(domain, region, bisect(domain, region, p, q)));
            }
        }
    }
    if found.is_empty() {
        let l = touch_point(domain, region);
        if domain.r(&region.point(l)).abs() < CROSSING_TOLERANCE {
            found.push(crossing(domain, region, l));
        }
    }
    if found.is_empty() {
        return Err(GleasonError::NoCrossing);
    }
    Ok(found)
}

/// Transversality of the line `a + λb` to the boundary at every crossing.
pub fn check_transversality(
    domain: &Domain,
    a: &[C64],
    b: &[C64],
    resolution: usize,
) -> Result<TransversalityReport> {
    let region = slice(domain, a, b, resolution)?;
    transversality_of(domain, &region)
}

pub fn transversality_of(domain: &Domain, region: &SliceRegion) -> Result<TransversalityReport> {
    let all = crossings(domain, region)?;
    let rel = |c: &Crossing| c.defect / c.gradient_norm.max(f64::MIN_POSITIVE);
    let worst = all
        .iter()
        .min_by(|x, y| rel(x).total_cmp(&rel(y)))
        .cloned()
        .unwrap();
    Ok(TransversalityReport {
        crossings: all.len(),
        min_defect: all.iter().map(|c| c.defect).fold(f64::INFINITY, f64::min),
        transversal: !worst.is_tangential(),
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;

    #[test]
    fn ball_line_through_origin_is_transversal() {
        let d = Domain::unit_ball(2);
        let rep =
            check_transversality(&d, &cvec::zeros(2), &[c(1.0, 0.0), c(0.0, 0.0)], 128).unwrap();
        assert!(rep.transversal);
        // |∂r/∂z_1| = |conj(z_1)| = 1 on the unit circle of the slice
        assert!((rep.min_defect - 1.0).abs() < 1e-8);
        assert!((rep.worst.lambda.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn complex_tangent_line_is_not_transversal() {
        let d = Domain::unit_ball(2);
        let rep = check_transversality(
            &d,
            &[c(1.0, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(1.0, 0.0)],
            128,
        )
        .unwrap();
        assert!(!rep.transversal);
        assert!(rep.worst.lambda.norm() < 1e-4);
        assert!(rep.min_defect < 1e-4);
    }

    #[test]
    fn empty_slice_has_no_crossing() {
        let d = Domain::unit_ball(2);
        let err = check_transversality(
            &d,
            &[c(0.0, 0.0), c(2.0, 0.0)],
            &[c(1.0, 0.0), c(0.0, 0.0)],
            64,
        )
        .unwrap_err();
        assert_eq!(err, GleasonError::NoCrossing);
    }
}
