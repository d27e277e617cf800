use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};

/// `h(x) = -x / ln x` with `h(0) = 0`, and its derivative.
pub(crate) fn grange_h(x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    let l = x.ln();
    (-x / l, -1.0 / l + 1.0 / (l * l))
}

/// Beyond this radius in |z2| the Grangé profile is continued linearly; the
/// domain only reaches |z2| < 0.5672 so the continuation never touches it.
pub const GRANGE_CAP: f64 = 0.8;

/// Solution of `h(x) = 1`, i.e. `x = exp(-x)`.
pub const OMEGA: f64 = 0.567_143_290_409_783_8;

fn grange_profile(x: f64) -> (f64, f64) {
    if x <= GRANGE_CAP {
        grange_h(x)
    } else {
        let (h, dh) = grange_h(GRANGE_CAP);
        (h + dh * (x - GRANGE_CAP), dh)
    }
}

/// One monomial of a real polynomial in the 2n real coordinates
/// `(x_1, y_1, ..., x_n, y_n)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RealTerm {
    pub pow: Vec<u32>,
    pub coef: f64,
}

pub type ImplicitFn = Arc<dyn Fn(&[C64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum DomainKind {
    /// `|z - c|^2 - R^2`
    Ball { center: CVec, radius: f64 },
    /// `sum_j w_j |z_j|^2 - 1`
    Ellipsoid { weights: Vec<f64> },
    /// `|z1|^2 + h(|z2|) - 1`, `h(x) = -x / ln x`
    Grange,
    /// `max(inner - |z1|, |z1| - outer, |z2| - disc)`, the signed distance
    /// to the boundary inside the product
    AnnulusProduct { inner: f64, outer: f64, disc: f64 },
    /// real polynomial in the real coordinates
    CustomPolynomial { terms: Vec<RealTerm> },
    /// arbitrary defining function; the gradient is taken by central differences
    Implicit { r: ImplicitFn },
}

impl fmt::Debug for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Ball { center, radius } => f
                .debug_struct("Ball")
                .field("center", center)
                .field("radius", radius)
                .finish(),
            DomainKind::Ellipsoid { weights } => f
                .debug_struct("Ellipsoid")
                .field("weights", weights)
                .finish(),
            DomainKind::Grange => f.write_str("Grange"),
            DomainKind::AnnulusProduct { inner, outer, disc } => f
                .debug_struct("AnnulusProduct")
                .field("inner", inner)
                .field("outer", outer)
                .field("disc", disc)
                .finish(),
            DomainKind::CustomPolynomial { terms } => f
                .debug_struct("CustomPolynomial")
                .field("terms", terms)
                .finish(),
            DomainKind::Implicit { .. } => f.write_str("Implicit"),
        }
    }
}

/// A bounded domain `{r < 0}` in C^n.
///
/// All geometry works in internal coordinates `u = z - offset`, where the
/// offset is the Gleason point; the origin of the internal frame is the
/// point at which functions are divided.
#[derive(Debug, Clone)]
pub struct Domain {
    name: String,
    kind: DomainKind,
    n: usize,
    epsilon: f64,
    offset: CVec,
    /// 2n real intervals in internal coordinates: x_1, y_1, x_2, ...
    bbox: Vec<(f64, f64)>,
    seed: CVec,
    scale: f64,
    diam: f64,
    convex: bool,
}

impl Domain {
    pub fn new(
        name: impl Into<String>,
        kind: DomainKind,
        n: usize,
        epsilon: f64,
        bbox: Vec<(f64, f64)>,
        seed: CVec,
        convex: bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(GleasonError::InvalidInput(
                "domain dimension must be >= 1".into(),
            ));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(GleasonError::InvalidInput(format!(
                "Hölder exponent must lie in (0, 1], got {epsilon}"
            )));
        }
        if bbox.len() != 2 * n || seed.len() != n {
            return Err(GleasonError::DimensionMismatch {
                expected: 2 * n,
                got: bbox.len(),
            });
        }
        let diam = bbox
            .iter()
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt();
        let mut d = Domain {
            name: name.into(),
            kind,
            n,
            epsilon,
            offset: cvec::zeros(n),
            bbox,
            seed,
            scale: 1.0,
            diam,
            convex,
        };
        let mut scale = d.r(&d.seed).abs();
        for corner in d.bbox_corners() {
            scale = scale.max(d.r(&corner).abs());
        }
        d.scale = scale;
        d.validate()?;
        Ok(d)
    }

    pub fn ball(n: usize, radius: f64) -> Self {
        let bbox = vec![(-radius * 1.02, radius * 1.02); 2 * n];
        Domain::new(
            "ball",
            DomainKind::Ball {
                center: cvec::zeros(n),
                radius,
            },
            n,
            1.0,
            bbox,
            cvec::zeros(n),
            true,
        )
        .expect("ball is a valid domain")
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::ball(n, 1.0)
    }

    pub fn ellipsoid(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| *w <= 0.0) {
            return Err(GleasonError::InvalidInput(
                "ellipsoid weights must be positive".into(),
            ));
        }
        let n = weights.len();
        let bbox = weights
            .iter()
            .flat_map(|w| {
                let a = 1.02 / w.sqrt();
                [(-a, a), (-a, a)]
            })
            .collect();
        Domain::new(
            "ellipsoid",
            DomainKind::Ellipsoid {
                weights: weights.to_vec(),
            },
            n,
            1.0,
            bbox,
            cvec::zeros(n),
            true,
        )
    }

    pub fn grange(epsilon: f64) -> Result<Self> {
        let a = 1.02;
        let b = OMEGA * 1.02;
        Domain::new(
            "grange",
            DomainKind::Grange,
            2,
            epsilon,
            vec![(-a, a), (-a, a), (-b, b), (-b, b)],
            cvec::zeros(2),
            true,
        )
    }

    pub fn annulus_product(inner: f64, outer: f64, disc: f64) -> Result<Self> {
        if !(0.0 < inner && inner < outer && disc > 0.0) {
            return Err(GleasonError::InvalidInput(
                "annulus product needs 0 < inner < outer and disc > 0".into(),
            ));
        }
        let a = outer * 1.02;
        let b = disc * 1.02;
        let mid = 0.5 * (inner + outer);
        Domain::new(
            "annulus_product",
            DomainKind::AnnulusProduct { inner, outer, disc },
            2,
            1.0,
            vec![(-a, a), (-a, a), (-b, b), (-b, b)],
            vec![C64::new(mid, 0.0), C64::new(0.0, 0.0)],
            false,
        )
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(GleasonError::InvalidInput(format!(
                "Hölder exponent must lie in (0, 1], got {epsilon}"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Moves the internal origin to the original-coordinate point `p`.
    pub fn recentered(&self, p: &[C64]) -> Result<Self> {
        if p.len() != self.n {
            return Err(GleasonError::DimensionMismatch {
                expected: self.n,
                got: p.len(),
            });
        }
        let mut d = self.clone();
        // internal shift relative to the current internal frame
        let shift = cvec::sub(p, &self.offset);
        d.offset = p.to_vec();
        d.seed = cvec::sub(&self.seed, &shift);
        d.bbox = self
            .bbox
            .iter()
            .enumerate()
            .map(|(k, (lo, hi))| {
                let s = cvec::real_coord(&shift, k);
                (lo - s, hi - s)
            })
            .collect();
        Ok(d)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Exponent `1 / (1 + eps/2)` of the collar radius schedule.
    pub fn collar_exponent(&self) -> f64 {
        1.0 / (1.0 + 0.5 * self.epsilon)
    }

    pub fn offset(&self) -> &[C64] {
        &self.offset
    }

    pub fn seed(&self) -> &[C64] {
        &self.seed
    }

    pub fn bbox(&self) -> &[(f64, f64)] {
        &self.bbox
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Diagonal of the bounding box.
    pub fn diameter(&self) -> f64 {
        self.diam
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn boundary_tolerance(&self) -> f64 {
        1e-8 * self.scale
    }

    pub fn to_original(&self, u: &[C64]) -> CVec {
        cvec::add(u, &self.offset)
    }

    pub fn from_original(&self, z: &[C64]) -> CVec {
        cvec::sub(z, &self.offset)
    }

    pub fn bbox_center(&self) -> CVec {
        (0..self.n)
            .map(|j| {
                let (a, b) = self.bbox[2 * j];
                let (c, d) = self.bbox[2 * j + 1];
                C64::new(0.5 * (a + b), 0.5 * (c + d))
            })
            .collect()
    }

    pub fn bbox_corners(&self) -> Vec<CVec> {
        let m = 2 * self.n;
        (0..(1usize << m))
            .map(|mask| {
                (0..self.n)
                    .map(|j| {
                        let pick = |k: usize| {
                            let (lo, hi) = self.bbox[k];
                            if mask >> k & 1 == 1 {
                                hi
                            } else {
                                lo
                            }
                        };
                        C64::new(pick(2 * j), pick(2 * j + 1))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn in_bbox(&self, u: &[C64]) -> bool {
        (0..2 * self.n).all(|k| {
            let x = cvec::real_coord(u, k);
            let (lo, hi) = self.bbox[k];
            x >= lo && x <= hi
        })
    }

    fn validate(&self) -> Result<()> {
        if self.r(&self.seed) >= 0.0 {
            return Err(GleasonError::InvalidInput(format!(
                "domain `{}`: seed point {} is not interior",
                self.name,
                cvec::fmt_point(&self.seed)
            )));
        }
        for corner in self.bbox_corners() {
            if self.r(&corner) <= 0.0 {
                return Err(GleasonError::InvalidInput(format!(
                    "domain `{}`: bounding-box corner {} is not exterior",
                    self.name,
                    cvec::fmt_point(&corner)
                )));
            }
        }
        Ok(())
    }

    /// Fails unless the internal origin (the Gleason point) is interior.
    pub fn require_origin_interior(&self) -> Result<()> {
        let zero = cvec::zeros(self.n);
        if self.r(&zero) < 0.0 {
            Ok(())
        } else {
            Err(GleasonError::PointOutsideDomain {
                at: cvec::fmt_point(&self.to_original(&zero)),
            })
        }
    }

    pub fn contains(&self, u: &[C64]) -> bool {
        self.r(u) < 0.0
    }

    /// Defining function at an internal-coordinate point.
    pub fn r(&self, u: &[C64]) -> f64 {
        let z = cvec::add(u, &self.offset);
        match &self.kind {
            DomainKind::Ball { center, radius } => cvec::dist(&z, center).powi(2) - radius * radius,
            DomainKind::Ellipsoid { weights } => {
                z.iter()
                    .zip(weights)
                    .map(|(zj, w)| w * zj.norm_sqr())
                    .sum::<f64>()
                    - 1.0
            }
            DomainKind::Grange => z[0].norm_sqr() + grange_profile(z[1].norm()).0 - 1.0,
            DomainKind::AnnulusProduct { inner, outer, disc } => {
                let a = z[0].norm();
                (inner - a).max(a - outer).max(z[1].norm() - disc)
            }
            DomainKind::CustomPolynomial { terms } => terms
                .iter()
                .map(|t| {
                    t.pow.iter().enumerate().fold(t.coef, |acc, (k, &p)| {
                        acc * cvec::real_coord(&z, k).powi(p as i32)
                    })
                })
                .sum(),
            DomainKind::Implicit { r } => r(&z),
        }
    }

    /// Real gradient of r encoded as a complex vector:
    /// `g_j = dr/dx_j + i dr/dy_j = 2 conj(dr/dz_j)`.
    pub fn gradient(&self, u: &[C64]) -> CVec {
        let z = cvec::add(u, &self.offset);
        match &self.kind {
            DomainKind::Ball { center, .. } => {
                z.iter().zip(center).map(|(a, b)| (a - b) * 2.0).collect()
            }
            DomainKind::Ellipsoid { weights } => {
                z.iter().zip(weights).map(|(a, w)| a * (2.0 * w)).collect()
            }
            DomainKind::Grange => {
                let x = z[1].norm();
                let dh = grange_profile(x).1;
                let g2 = if x > 0.0 {
                    z[1] * (dh / x)
                } else {
                    C64::new(0.0, 0.0)
                };
                vec![z[0] * 2.0, g2]
            }
            DomainKind::AnnulusProduct { inner, outer, disc } => {
                let a = z[0].norm();
                let b = z[1].norm();
                let unit = |w: C64, m: f64| if m > 0.0 { w / m } else { C64::new(1.0, 0.0) };
                let (ri, ro, rd) = (inner - a, a - outer, b - disc);
                if ri >= ro && ri >= rd {
                    vec![-unit(z[0], a), C64::new(0.0, 0.0)]
                } else if ro >= rd {
                    vec![unit(z[0], a), C64::new(0.0, 0.0)]
                } else {
                    vec![C64::new(0.0, 0.0), unit(z[1], b)]
                }
            }
            DomainKind::CustomPolynomial { terms } => {
                let mut g = vec![0.0; 2 * self.n];
                for t in terms {
                    for k in 0..2 * self.n {
                        if t.pow[k] == 0 {
                            continue;
                        }
                        let mut v = t.coef * t.pow[k] as f64;
                        for (m, &p) in t.pow.iter().enumerate() {
                            let x = cvec::real_coord(&z, m);
                            let e = if m == k { p - 1 } else { p };
                            v *= x.powi(e as i32);
                        }
                        g[k] += v;
                    }
                }
                (0..self.n)
                    .map(|j| C64::new(g[2 * j], g[2 * j + 1]))
                    .collect()
            }
            DomainKind::Implicit { .. } => self.fd_gradient(u),
        }
    }

    /// Central differences with step `1e-6 * diameter`.
    pub fn fd_gradient(&self, u: &[C64]) -> CVec {
        let h = 1e-6 * self.diam;
        let mut g = cvec::zeros(self.n);
        for k in 0..2 * self.n {
            let e = cvec::real_unit(self.n, k);
            let plus = cvec::axpy(u, C64::new(h, 0.0), &e);
            let minus = cvec::axpy(u, C64::new(-h, 0.0), &e);
            let d = (self.r(&plus) - self.r(&minus)) / (2.0 * h);
            if k % 2 == 0 {
                g[k / 2].re = d;
            } else {
                g[k / 2].im = d;
            }
        }
        g
    }

    /// `dr/dz_j = conj(g_j) / 2`.
    pub fn complex_gradient(&self, u: &[C64]) -> CVec {
        self.gradient(u).iter().map(|g| g.conj() * 0.5).collect()
    }

    /// Exact signed distance to the boundary where a closed form exists.
    pub(crate) fn closed_form_distance(&self, u: &[C64]) -> Option<f64> {
        let z = cvec::add(u, &self.offset);
        match &self.kind {
            DomainKind::Ball { center, radius } => Some(radius - cvec::dist(&z, center)),
            DomainKind::AnnulusProduct { .. } => {
                let r = self.r(u);
                // inside, -r is the exact distance; outside it is a lower bound
                Some(-r)
            }
            _ => None,
        }
    }
}


/// Boundary points of the Grangé domain at `|z2| = eta`, with eta
/// log-uniform in `[eta_min, eta_max]` and uniform phases; these cluster at
/// the circle `{|z1| = 1, z2 = 0}` where the boundary is only C^1.
pub fn grange_seam_points<R: rand::Rng>(
    count: usize,
    eta_min: f64,
    eta_max: f64,
    rng: &mut R,
) -> Vec<CVec> {
    use std::f64::consts::TAU;
    (0..count)
        .map(|_| {
            let eta = eta_min * (eta_max / eta_min).powf(rng.gen::<f64>());
            let a = (1.0 - grange_h(eta).0).sqrt();
            vec![
                C64::from_polar(a, TAU * rng.gen::<f64>()),
                C64::from_polar(eta, TAU * rng.gen::<f64>()),
            ]
        })
        .collect()
}
