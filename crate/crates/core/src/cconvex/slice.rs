use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};
use crate::geometry::Domain;

/// Smallest accepted raster resolution.
pub const MIN_RESOLUTION: usize = 64;

/// Components below this many pixels make a topology verdict untrusted.
pub const MIN_COMPONENT_PIXELS: usize = 4;

/// Raster of `{λ : r(a + λb) < 0}` on a square grid of `m x m` nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceRegion {
    pub base: CVec,
    pub direction: CVec,
    pub resolution: usize,
    /// Lower-left grid node.
    pub origin: C64,
    /// Node spacing.
    pub step: f64,
    /// Row-major, `mask[j * m + i]` is the node `origin + step (i + i j)`.
    pub mask: Vec<bool>,
}

impl SliceRegion {
    pub fn node(&self, i: usize, j: usize) -> C64 {
        self.origin + C64::new(self.step * i as f64, self.step * j as f64)
    }

    pub fn point(&self, lambda: C64) -> CVec {
        cvec::axpy(&self.base, lambda, &self.direction)
    }

    pub fn inside(&self, i: usize, j: usize) -> bool {
        self.mask[j * self.resolution + i]
    }

    pub fn inside_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.inside_count() == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }
}

/// Rasterizes the slice of the domain by the complex line `a + λb`.
///
/// The grid is centered on the preimage of the bounding-box center in the
/// coordinate where `|b_j|` is largest, with half-width 1.02 times the
/// preimage radius of that coordinate's box rectangle, so it contains every
/// λ with `a + λb` in the box and its frame lies outside the domain.
pub fn slice(domain: &Domain, a: &[C64], b: &[C64], resolution: usize) -> Result<SliceRegion> {
    let n = domain.dim();
    if a.len() != n || b.len() != n {
        return Err(GleasonError::DimensionMismatch {
            expected: n,
            got: if a.len() != n { a.len() } else { b.len() },
        });
    }
    let nb = cvec::norm(b);
    if (nb - 1.0).abs() > 1e-10 {
        return Err(GleasonError::DegenerateDirection { norm: nb });
    }
    if resolution < MIN_RESOLUTION {
        return Err(GleasonError::InvalidInput(format!(
            "slice resolution {resolution} is below {MIN_RESOLUTION}"
        )));
    }
    let j = (0..n)
        .max_by(|&x, &y| b[x].norm().total_cmp(&b[y].norm()))
        .unwrap();
    let bb = domain.bbox();
    let (x0, x1) = bb[2 * j];
    let (y0, y1) = bb[2 * j + 1];
    let center = (C64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1)) - a[j]) / b[j];
    let half = 1.02 * 0.5 * (x1 - x0).hypot(y1 - y0) / b[j].norm();
    let origin = center - C64::new(half, half);
    let step = 2.0 * half / (resolution - 1) as f64;
    let mut region = SliceRegion {
        base: a.to_vec(),
        direction: b.to_vec(),
        resolution,
        origin,
        step,
        mask: Vec::new(),
    };
    let m = resolution;
    region.mask = (0..m * m)
        .map(|k| domain.contains(&region.point(region.node(k % m, k / m))))
        .collect();
    Ok(region)
}

/// Connected components of pixels with `mask == value`, 4- or
/// 8-connected. Returns a label per pixel (`usize::MAX` for other pixels)
/// and the component sizes.
fn components(region: &SliceRegion, value: bool, eight: bool) -> (Vec<usize>, Vec<usize>) {
    let m = region.resolution;
    let mut label = vec![usize::MAX; m * m];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    let offsets: &[(isize, isize)] = if eight {
        &[
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ]
    } else {
        &[(1, 0), (-1, 0), (0, 1), (0, -1)]
    };
    for start in 0..m * m {
        if region.mask[start] != value || label[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut size = 0;
        label[start] = id;
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            size += 1;
            let (i, j) = ((k % m) as isize, (k / m) as isize);
            for (di, dj) in offsets {
                let (x, y) = (i + di, j + dj);
                if x < 0 || y < 0 || x >= m as isize || y >= m as isize {
                    continue;
                }
                let kk = y as usize * m + x as usize;
                if region.mask[kk] == value && label[kk] == usize::MAX {
                    label[kk] = id;
                    queue.push_back(kk);
                }
            }
        }
        sizes.push(size);
    }
    (label, sizes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub empty: bool,
    pub connected: bool,
    pub simply_connected: bool,
    /// Some component has fewer than [`MIN_COMPONENT_PIXELS`] pixels.
    pub resolution_warning: bool,
    pub inside_components: usize,
    pub holes: usize,
}

/// Inside pixels use 4-connectivity and outside pixels 8-connectivity, the
/// dual pair for which holes of the inside set are exactly the outside
/// components not touching the frame. An empty mask is vacuously connected
/// and simply connected.
pub fn topology(region: &SliceRegion) -> Topology {
    let m = region.resolution;
    let (_, inside) = components(region, true, false);
    let (label, outside) = components(region, false, true);
    let mut touches = vec![false; outside.len()];
    for t in 0..m {
        for k in [t, (m - 1) * m + t, t * m, t * m + m - 1] {
            if label[k] != usize::MAX {
                touches[label[k]] = true;
            }
        }
    }
    let framed = touches.iter().filter(|&&t| t).count();
    let holes = touches.iter().filter(|&&t| !t).count();
    let small = inside.iter().any(|&s| s < MIN_COMPONENT_PIXELS)
        || outside
            .iter()
            .zip(&touches)
            .any(|(&s, &t)| !t && s < MIN_COMPONENT_PIXELS);
    Topology {
        empty: inside.is_empty(),
        connected: inside.len() <= 1,
        simply_connected: framed <= 1 && holes == 0,
        resolution_warning: small,
        inside_components: inside.len(),
        holes,
    }
}

pub fn is_connected(region: &SliceRegion) -> bool {
    topology(region).connected
}

pub fn is_simply_connected(region: &SliceRegion) -> bool {
    topology(region).simply_connected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::c;

    fn e1() -> CVec {
        vec![c(1.0, 0.0), c(0.0, 0.0)]
    }

    /// Every grid node whose disc membership is decided by more than one
    /// cell agrees with the analytic disc.
    fn check_disc(region: &SliceRegion, radius: f64) {
        let m = region.resolution;
        for j in 0..m {
            for i in 0..m {
                let l = region.node(i, j).norm();
                if (l - radius).abs() > region.step {
                    assert_eq!(region.inside(i, j), l < radius, "node {i},{j} at |λ| = {l}");
                }
            }
        }
    }

    #[test]
    fn ball_slice_through_origin_is_unit_disc() {
        let d = Domain::unit_ball(2);
        let s = slice(&d, &cvec::zeros(2), &e1(), 128).unwrap();
        check_disc(&s, 1.0);
        let t = topology(&s);
        assert!(t.connected && t.simply_connected && !t.empty && !t.resolution_warning);
    }

    #[test]
    fn ball_slice_offset_has_radius_sqrt3_over_2() {
        let d = Domain::unit_ball(2);
        let s = slice(&d, &[c(0.0, 0.0), c(0.5, 0.0)], &e1(), 128).unwrap();
        check_disc(&s, 3f64.sqrt() / 2.0);
    }

    #[test]
    fn annulus_slice_has_a_hole() {
        let d = Domain::annulus_product(0.5, 1.0, 1.0).unwrap();
        let s = slice(&d, &cvec::zeros(2), &e1(), 128).unwrap();
        let m = s.resolution;
        for j in 0..m {
            for i in 0..m {
                let l = s.node(i, j).norm();
                if (l - 0.5).abs() > s.step && (l - 1.0).abs() > s.step {
                    assert_eq!(s.inside(i, j), l > 0.5 && l < 1.0);
                }
            }
        }
        let t = topology(&s);
        assert!(t.connected);
        assert!(!t.simply_connected);
        assert_eq!(t.holes, 1);
    }

    #[test]
    fn empty_slice_is_vacuous() {
        let d = Domain::unit_ball(2);
        let s = slice(&d, &[c(0.0, 0.0), c(2.0, 0.0)], &e1(), 64).unwrap();
        let t = topology(&s);
        assert!(t.empty && t.connected && t.simply_connected);
    }

    #[test]
    fn rejects_non_unit_direction() {
        let d = Domain::unit_ball(2);
        let err = slice(&d, &cvec::zeros(2), &[c(1.0, 0.0), c(1e-3, 0.0)], 64).unwrap_err();
        assert!(matches!(err, GleasonError::DegenerateDirection { .. }));
    }

    #[test]
    fn frame_is_outside() {
        let d = Domain::ellipsoid(&[1.0, 4.0]).unwrap();
        let b = cvec::normalized(&[c(0.3, 0.1), c(-0.5, 0.7)]).unwrap();
        let s = slice(&d, &[c(0.1, 0.0), c(0.0, 0.2)], &b, 96).unwrap();
        let m = s.resolution;
        for t in 0..m {
            assert!(
                !s.inside(t, 0) && !s.inside(t, m - 1) && !s.inside(0, t) && !s.inside(m - 1, t)
            );
        }
    }
}
