//! Sampled verification of the collar membership property: for a boundary
//! point z in patch i, `z + (1-s) pi_z(n_i) + t e` stays inside for every
//! complex tangent e at z and `|t| < (1-s)^p`.

use std::f64::consts::TAU;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cover::CollarCover;
use super::frame::{project_onto_line, tangent_basis};
use super::Domain;
use crate::cvec::{self, CVec, C64};

/// Dyadic bins of `1 - s` below sigma.
pub const LEMMA1_BINS: usize = 20;

/// A boundary point prepared for membership probes.
#[derive(Debug, Clone)]
pub(crate) struct Probe {
    pub z: CVec,
    pub tangents: Vec<CVec>,
}

impl Probe {
    pub fn new(domain: &Domain, z: CVec) -> Self {
        let tangents = tangent_basis(&domain.gradient(&z));
        Probe { z, tangents }
    }
}

/// Fixed probe depths `sigma_max 2^{-j/2}`; smaller sigmas test a subset,
/// so the pass/fail outcome is monotone in sigma.
pub(crate) fn probe_depths(sigma_max: f64) -> Vec<f64> {
    (0..=44)
        .map(|j| 0.999 * sigma_max * 0.5f64.powf(j as f64 / 2.0))
        .collect()
}

/// True when every deterministic probe with depth below `sigma` is inside.
pub(crate) fn probes_pass(
    domain: &Domain,
    normal: &[C64],
    probes: &[Probe],
    depths: &[f64],
    sigma: f64,
    p: f64,
) -> bool {
    for pr in probes {
        let Ok(dir) = project_onto_line(normal, &pr.z) else {
            return false;
        };
        let mut dirs: Vec<CVec> = pr.tangents.clone();
        if pr.tangents.len() > 1 {
            let sum = pr
                .tangents
                .iter()
                .fold(cvec::zeros(pr.z.len()), |a, t| cvec::add(&a, t));
            dirs.push(cvec::normalized(&sum).unwrap());
        }
        for &d in depths.iter().filter(|d| **d < sigma) {
            let base = cvec::axpy(&pr.z, C64::new(d, 0.0), &dir);
            let rad = d.powf(p);
            for e in &dirs {
                for frac in [0.999, 0.5] {
                    for k in 0..6 {
                        let t = C64::from_polar(rad * frac, TAU * (k as f64 + 0.25) / 6.0);
                        if domain.r(&cvec::axpy(&base, t, e)) >= 0.0 {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Lemma1Row {
    pub patch: usize,
    pub s: f64,
    pub t_abs: f64,
    /// `-r` at the probe point; positive inside.
    pub margin: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Lemma1Bin {
    /// `1 - s` lies in `[lo, hi)`.
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub violations: usize,
    pub mean_margin: f64,
    pub min_margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Lemma1Report {
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
    /// Ordered from the deepest bin (largest `1 - s`) towards `s = 1`.
    pub bins: Vec<Lemma1Bin>,
    pub rows: Vec<Lemma1Row>,
}

impl Lemma1Report {
    /// Mean margin is non-increasing as `s -> 1` over nonempty bins.
    pub fn margin_monotone(&self) -> bool {
        let means: Vec<f64> = self
            .bins
            .iter()
            .filter(|b| b.count > 0)
            .map(|b| b.mean_margin)
            .collect();
        means.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "patch_id,s,t_abs,margin,inside")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{:.17e},{:.17e},{:.17e},{}",
                r.patch, r.s, r.t_abs, r.margin, r.inside
            )?;
        }
        Ok(())
    }
}

/// Random probes: patch uniform, z a boundary sample of that patch, `1 - s`
/// log-uniform over `LEMMA1_BINS` dyadic bins below sigma, t uniform in the
/// disc of radius `(1-s)^p`, e a random unit complex tangent at z.
pub fn verify_lemma1(
    domain: &Domain,
    cover: &CollarCover,
    sample_count: usize,
    seed: u64,
) -> Lemma1Report {
    verify_lemma1_on(domain, cover, &cover.samples, sample_count, seed)
}

/// As [`verify_lemma1`], drawing z from the given boundary points instead
/// of the cover's own sample.
pub fn verify_lemma1_on(
    domain: &Domain,
    cover: &CollarCover,
    points: &[CVec],
    sample_count: usize,
    seed: u64,
) -> Lemma1Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = domain.collar_exponent();
    let sigma = cover.sigma;
    let members: Vec<Vec<usize>> = (0..cover.patches.len())
        .map(|k| {
            let pt = &cover.patches[k];
            (0..points.len())
                .filter(|i| cvec::dist(&points[*i], &pt.center) < pt.radius)
                .collect()
        })
        .collect();
    let usable: Vec<usize> = (0..members.len())
        .filter(|k| !members[*k].is_empty())
        .collect();
    let mut bins: Vec<Lemma1Bin> = (0..LEMMA1_BINS)
        .map(|j| Lemma1Bin {
            lo: sigma * 0.5f64.powi(j as i32 + 1),
            hi: sigma * 0.5f64.powi(j as i32),
            count: 0,
            violations: 0,
            mean_margin: 0.0,
            min_margin: f64::INFINITY,
        })
        .collect();
    let mut rows = Vec::with_capacity(sample_count);
    if usable.is_empty() {
        return Lemma1Report {
            samples: 0,
            violations: 0,
            worst_margin: f64::NAN,
            bins,
            rows,
        };
    }
    for _ in 0..sample_count {
        let k = usable[rng.gen_range(0..usable.len())];
        let z = &points[members[k][rng.gen_range(0..members[k].len())]];
        let probe = Probe::new(domain, z.clone());
        let depth = sigma * 0.5f64.powf(rng.gen::<f64>() * LEMMA1_BINS as f64);
        let rad = depth.powf(p) * rng.gen::<f64>().sqrt();
        let t = C64::from_polar(rad, TAU * rng.gen::<f64>());
        let coeffs: CVec = probe
            .tangents
            .iter()
            .map(|_| C64::new(super::gauss(&mut rng), super::gauss(&mut rng)))
            .collect();
        let e = probe
            .tangents
            .iter()
            .zip(&coeffs)
            .fold(cvec::zeros(z.len()), |acc, (tj, cj)| {
                cvec::axpy(&acc, *cj, tj)
            });
        let e = cvec::normalized(&e).unwrap_or_else(|| probe.tangents[0].clone());
        let dir = project_onto_line(&cover.patches[k].center_normal, z)
            .unwrap_or_else(|_| cvec::zeros(z.len()));
        let point = cvec::axpy(&cvec::axpy(z, C64::new(depth, 0.0), &dir), t, &e);
        let margin = -domain.r(&point);
        let inside = margin > 0.0;
        let j = ((sigma / depth).log2().floor() as usize).min(LEMMA1_BINS - 1);
        let b = &mut bins[j];
        b.count += 1;
        b.mean_margin += margin;
        b.min_margin = b.min_margin.min(margin);
        if !inside {
            b.violations += 1;
        }
        rows.push(Lemma1Row {
            patch: k,
            s: 1.0 - depth,
            t_abs: rad,
            margin,
            inside,
        });
    }
    for b in &mut bins {
        if b.count > 0 {
            b.mean_margin /= b.count as f64;
        }
    }
    Lemma1Report {
        samples: rows.len(),
        violations: rows.iter().filter(|r| !r.inside).count(),
        worst_margin: rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
        bins,
        rows,
    }
}
