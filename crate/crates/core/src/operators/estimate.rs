//! Empirical constant in `||T_i(P)||_B <= K ||P||_S`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};
use crate::geometry::{gauss, tangent_frame, CollarCover, Domain};
use crate::planner::{plan_path, PlanOptions};
use crate::polynomial::{multi_indices, Polynomial};

use super::integral::derivative_circles;

/// The test set B and the compact S carrying the derivative circles used to
/// evaluate `T_i` on B.
#[derive(Debug, Clone, PartialEq)]
pub struct KSample {
    pub b: Vec<CVec>,
    pub s: Vec<CVec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KSampleOptions {
    pub b_points: usize,
    /// Circle centers sampled per curve piece.
    pub per_piece: usize,
    /// Nodes per circle.
    pub circle_nodes: usize,
    /// Circle dilation factor.
    pub dilation: f64,
    /// S keeps only points with `r <= -delta * scale`.
    pub delta: f64,
    pub seed: u64,
}

impl Default for KSampleOptions {
    fn default() -> Self {
        KSampleOptions {
            b_points: 32,
            per_piece: 5,
            circle_nodes: 8,
            dilation: 1.05,
            delta: 1e-9,
            seed: 17,
        }
    }
}

/// B: the center plus random points of the ball `B(center, radius)` inside
/// the domain. S: B together with the dilated derivative circles of every
/// planned curve from 0 to a point of B, in the coordinate directions and,
/// on collar parts, the tangent directions; points too close to the
/// boundary are dropped.
pub fn build_k_sample(
    domain: &Domain,
    cover: &CollarCover,
    center: &[C64],
    radius: f64,
    opts: &KSampleOptions,
) -> Result<KSample> {
    let n = domain.dim();
    if !domain.contains(center) {
        return Err(GleasonError::PointOutsideDomain {
            at: cvec::fmt_point(&domain.to_original(center)),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut b = vec![center.to_vec()];
    let mut tries = 0;
    while b.len() < opts.b_points && tries < 1000 * opts.b_points {
        tries += 1;
        let dir: CVec = (0..n)
            .map(|_| C64::new(gauss(&mut rng), gauss(&mut rng)))
            .collect();
        let dir = cvec::normalized(&dir).unwrap();
        let rho = radius * rng.gen::<f64>().powf(1.0 / (2 * n) as f64);
        let x = cvec::axpy(center, C64::new(rho, 0.0), &dir);
        if domain.contains(&x) && domain.r(&x) <= -opts.delta * domain.scale() {
            b.push(x);
        }
    }
    let cut = -opts.delta * domain.scale();
    let per_point: Vec<Vec<CVec>> = b
        .par_iter()
        .map(|x| -> Result<Vec<CVec>> {
            if cvec::norm(x) == 0.0 {
                return Ok(Vec::new());
            }
            let plan = plan_path(domain, cover, x, &PlanOptions::default())?;
            let mut dirs: Vec<CVec> = (0..n).map(|i| cvec::unit(n, i)).collect();
            if let Some(c) = &plan.gamma2 {
                dirs.extend(tangent_frame(domain, &c.w)?.tangents);
            }
            let mut pts = Vec::new();
            for (c, rho) in derivative_circles(&plan, opts.per_piece) {
                for e in &dirs {
                    for k in 0..opts.circle_nodes {
                        let t = C64::from_polar(
                            opts.dilation * rho,
                            std::f64::consts::TAU * k as f64 / opts.circle_nodes as f64,
                        );
                        let y = cvec::axpy(&c, t, e);
                        if domain.r(&y) <= cut {
                            pts.push(y);
                        }
                    }
                }
            }
            Ok(pts)
        })
        .collect::<Result<_>>()?;
    let mut s = b.clone();
    for v in per_point {
        s.extend(v);
    }
    Ok(KSample { b, s })
}

/// Random polynomial vanishing at 0 with every coefficient of degree
/// `1..=degree` uniform in the complex unit disc.
pub fn random_polynomial<R: Rng>(n: usize, degree: u32, rng: &mut R) -> Polynomial {
    let mut terms = Vec::new();
    for alpha in multi_indices(n, 1, degree) {
        let c = loop {
            let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if c.norm_sqr() <= 1.0 {
                break c;
            }
        };
        terms.push((alpha, c));
    }
    Polynomial::from_terms(n, terms).expect("dimensions agree")
}

fn sup(p: &Polynomial, pts: &[CVec]) -> f64 {
    pts.iter()
        .map(|x| p.eval_unchecked(x).norm())
        .fold(0.0, f64::max)
}

/// `max_i ||T_i(P)||_B / ||P||_S`.
pub fn k_ratio(p: &Polynomial, sample: &KSample) -> Result<f64> {
    let s = sup(p, &sample.s);
    if s == 0.0 {
        return Err(GleasonError::InvalidInput(
            "polynomial vanishes on S".into(),
        ));
    }
    let t = p
        .leibenzon_all()?
        .iter()
        .map(|t| sup(t, &sample.b))
        .fold(0.0, f64::max);
    Ok(t / s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KRow {
    pub degree: u32,
    pub trial: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KTable {
    pub rows: Vec<KRow>,
    /// `(degree, max ratio over trials)`
    pub per_degree: Vec<(u32, f64)>,
    /// Least-squares slope of `ln(max ratio)` against degree.
    pub log_slope: f64,
    pub summary: f64,
}

impl KTable {
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "degree,trial,ratio")?;
        for r in &self.rows {
            writeln!(out, "{},{},{:.17e}", r.degree, r.trial, r.ratio)?;
        }
        Ok(())
    }
}

pub(crate) fn log_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    if m < 2.0 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Ratio table over `trials` random polynomials per degree. Polynomials are
/// drawn from one seeded stream in (degree, trial) order; ratios are
/// computed in parallel.
pub fn estimate_k(
    sample: &KSample,
    n: usize,
    degrees: &[u32],
    trials: usize,
    seed: u64,
) -> Result<KTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys = Vec::new();
    for &d in degrees {
        for t in 0..trials {
            polys.push((d, t, random_polynomial(n, d, &mut rng)));
        }
    }
    let rows: Vec<KRow> = polys
        .par_iter()
        .map(|(d, t, p)| {
            Ok(KRow {
                degree: *d,
                trial: *t,
                ratio: k_ratio(p, sample)?,
            })
        })
        .collect::<Result<_>>()?;
    let per_degree: Vec<(u32, f64)> = degrees
        .iter()
        .map(|&d| {
            let m = rows
                .iter()
                .filter(|r| r.degree == d)
                .map(|r| r.ratio)
                .fold(0.0, f64::max);
            (d, m)
        })
        .collect();
    let pts: Vec<(f64, f64)> = per_degree.iter().map(|(d, r)| (*d as f64, *r)).collect();
    Ok(KTable {
        log_slope: log_slope(&pts),
        summary: per_degree.iter().map(|p| p.1).fold(0.0, f64::max),
        per_degree,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachRow {
    pub k: u32,
    /// Distance from the ball center to the boundary point approached.
    pub distance: f64,
    pub radius: f64,
    pub ratio: f64,
}

/// Balls `B(c_k, d_k / 2)` with `c_k = w + d_k n_w` and `d_k = 2^{-k}`
/// approaching the boundary point w along its inner normal; one K estimate
/// at a fixed degree per ball, with the same polynomial ensemble.
pub fn approach_boundary(
    domain: &Domain,
    cover: &CollarCover,
    w: &[C64],
    ks: &[u32],
    degree: u32,
    trials: usize,
    sample_opts: &KSampleOptions,
    seed: u64,
) -> Result<Vec<ApproachRow>> {
    let normal = crate::geometry::inner_normal(domain, w)?;
    ks.iter()
        .map(|&k| {
            let d = 0.5f64.powi(k as i32);
            let center = cvec::axpy(w, C64::new(d, 0.0), &normal);
            let sample = build_k_sample(domain, cover, &center, 0.5 * d, sample_opts)?;
            let table = estimate_k(&sample, domain.dim(), &[degree], trials, seed)?;
            Ok(ApproachRow {
                k,
                distance: d,
                radius: 0.5 * d,
                ratio: table.summary,
            })
        })
        .collect()
}
