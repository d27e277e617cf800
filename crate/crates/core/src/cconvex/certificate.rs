use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};
use crate::geometry::{gauss, Domain};

use super::slice::{slice, topology};
use super::transversal::transversality_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineFailure {
    Disconnected,
    NotSimplyConnected,
    Tangential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCheck {
    pub id: usize,
    pub base: CVec,
    pub direction: CVec,
    pub empty: bool,
    pub connected: bool,
    pub simply_connected: bool,
    /// Absent for empty slices.
    pub min_defect: Option<f64>,
    pub transversal: bool,
    pub resolution_warning: bool,
    pub failure: Option<LineFailure>,
}

impl LineCheck {
    /// Empty and flagged lines do not count toward the verdict.
    pub fn counted(&self) -> bool {
        !self.empty && !self.resolution_warning
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub line: usize,
    pub failure: LineFailure,
    /// The same failure at twice the resolution.
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CConvexReport {
    pub domain: String,
    pub verdict: Verdict,
    pub resolution: usize,
    pub lines: Vec<LineCheck>,
    pub counted: usize,
    pub empty: usize,
    pub flagged: usize,
    pub witness: Option<Witness>,
    /// Gleason point offset; line bases are stored in internal coordinates.
    pub offset: CVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CConvexOptions {
    pub lines: usize,
    pub resolution: usize,
    pub seed: u64,
    /// Largest fraction of flagged lines compatible with a PASS.
    pub max_flagged: f64,
}

impl Default for CConvexOptions {
    fn default() -> Self {
        CConvexOptions {
            lines: 200,
            resolution: 256,
            seed: 0xc07e,
            max_flagged: 0.1,
        }
    }
}

/// Checks one complex line `a + λb`.
pub fn check_line(
    domain: &Domain,
    id: usize,
    a: &[C64],
    b: &[C64],
    resolution: usize,
) -> Result<LineCheck> {
    let region = slice(domain, a, b, resolution)?;
    let topo = topology(&region);
    let trans = if topo.empty {
        None
    } else {
        match transversality_of(domain, &region) {
            Ok(t) => Some(t),
            Err(GleasonError::NoCrossing) => None,
            Err(e) => return Err(e),
        }
    };
    let transversal = trans.as_ref().map_or(true, |t| t.transversal);
    let failure = if topo.empty {
        None
    } else if !topo.connected {
        Some(LineFailure::Disconnected)
    } else if !topo.simply_connected {
        Some(LineFailure::NotSimplyConnected)
    } else if !transversal {
        Some(LineFailure::Tangential)
    } else {
        None
    };
    Ok(LineCheck {
        id,
        base: a.to_vec(),
        direction: b.to_vec(),
        empty: topo.empty,
        connected: topo.connected,
        simply_connected: topo.simply_connected,
        min_defect: trans.map(|t| t.min_defect),
        transversal,
        resolution_warning: topo.resolution_warning,
        failure,
    })
}

fn random_interior<R: Rng>(domain: &Domain, rng: &mut R) -> CVec {
    let bb = domain.bbox();
    loop {
        let p: CVec = (0..domain.dim())
            .map(|j| {
                let (a, b) = bb[2 * j];
                let (c, d) = bb[2 * j + 1];
                C64::new(rng.gen_range(a..b), rng.gen_range(c..d))
            })
            .collect();
        if domain.contains(&p) {
            return p;
        }
    }
}

/// A point at relative depth in `(0, 0.05]` inside a random boundary point.
fn random_near_boundary<R: Rng>(domain: &Domain, rng: &mut R) -> CVec {
    loop {
        let w = domain.sample_boundary(1, rng).pop();
        let Some(w) = w else { continue };
        let Ok(nu) = crate::geometry::inner_normal(domain, &w) else {
            continue;
        };
        let depth = 0.05 * domain.scale() * rng.gen_range(1e-3..1.0);
        let p = cvec::axpy(&w, C64::new(depth, 0.0), &nu);
        if domain.contains(&p) {
            return p;
        }
    }
}

/// The sampled lines: coordinate lines through 0, then lines through pairs
/// of random points, the first interior and the second alternately interior
/// or near the boundary.
pub fn sample_lines(domain: &Domain, count: usize, seed: u64) -> Vec<(CVec, CVec)> {
    let n = domain.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines: Vec<(CVec, CVec)> = (0..n.min(count))
        .map(|k| (cvec::zeros(n), cvec::unit(n, k)))
        .collect();
    while lines.len() < count {
        let p = random_interior(domain, &mut rng);
        let q = if lines.len() % 2 == 0 {
            random_interior(domain, &mut rng)
        } else {
            random_near_boundary(domain, &mut rng)
        };
        let b = match cvec::normalized(&cvec::sub(&q, &p)) {
            Some(b) if cvec::dist(&q, &p) > 1e-6 * domain.scale() => b,
            _ => {
                let v: CVec = (0..n)
                    .map(|_| C64::new(gauss(&mut rng), gauss(&mut rng)))
                    .collect();
                cvec::normalized(&v).unwrap()
            }
        };
        lines.push((p, b));
    }
    lines
}

/// ℂ-convexity certificate from sampled complex lines.
///
/// FAIL needs a counted failing line; the first one is re-checked at twice
/// the resolution and the verdict drops to INCONCLUSIVE if it does not
/// reproduce. PASS needs no failures and at most `max_flagged` of the
/// nonempty lines flagged.
pub fn check_cconvex(domain: &Domain, opts: &CConvexOptions) -> Result<CConvexReport> {
    let lines = sample_lines(domain, opts.lines, opts.seed);
    let checks: Vec<LineCheck> = lines
        .par_iter()
        .enumerate()
        .map(|(id, (a, b))| check_line(domain, id, a, b, opts.resolution))
        .collect::<Result<_>>()?;
    let empty = checks.iter().filter(|c| c.empty).count();
    let flagged = checks
        .iter()
        .filter(|c| !c.empty && c.resolution_warning)
        .count();
    let counted = checks.iter().filter(|c| c.counted()).count();
    let first_fail = checks.iter().find(|c| c.counted() && c.failure.is_some());
    let witness = match first_fail {
        Some(c) => {
            let again = check_line(domain, c.id, &c.base, &c.direction, 2 * opts.resolution)?;
            Some(Witness {
                line: c.id,
                failure: c.failure.unwrap(),
                stable: again.failure == c.failure,
            })
        }
        None => None,
    };
    let nonempty = checks.len() - empty;
    let verdict = match &witness {
        Some(w) if w.stable => Verdict::Fail,
        Some(_) => Verdict::Inconclusive,
        None if counted == 0 || flagged as f64 > opts.max_flagged * nonempty as f64 => {
            Verdict::Inconclusive
        }
        None => Verdict::Pass,
    };
    Ok(CConvexReport {
        domain: domain.name().to_string(),
        verdict,
        resolution: opts.resolution,
        lines: checks,
        counted,
        empty,
        flagged,
        witness,
        offset: domain.offset().to_vec(),
    })
}

impl CConvexReport {
    /// One row per line: id, base (original coordinates) and direction as
    /// real/imaginary columns, then the slice properties. `min_defect` is
    /// empty for empty slices.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.lines.first().map_or(0, |l| l.base.len());
        let mut header = vec!["line_id".to_string()];
        for v in ["a", "b"] {
            for j in 1..=n {
                header.push(format!("{v}{j}_re"));
                header.push(format!("{v}{j}_im"));
            }
        }
        header.extend(
            [
                "empty",
                "connected",
                "simply_connected",
                "transversal",
                "min_defect",
                "flagged",
            ]
            .map(String::from),
        );
        writeln!(out, "{}", header.join(","))?;
        for l in &self.lines {
            let mut row = vec![l.id.to_string()];
            let base: CVec = l
                .base
                .iter()
                .zip(&self.offset)
                .map(|(a, o)| a + o)
                .collect();
            for v in [&base, &l.direction] {
                for z in v.iter() {
                    row.push(format!("{:.17e}", z.re));
                    row.push(format!("{:.17e}", z.im));
                }
            }
            row.push(l.empty.to_string());
            row.push(l.connected.to_string());
            row.push(l.simply_connected.to_string());
            row.push(l.transversal.to_string());
            row.push(l.min_defect.map_or(String::new(), |d| format!("{d:.17e}")));
            row.push(l.resolution_warning.to_string());
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(lines: usize, resolution: usize) -> CConvexOptions {
        CConvexOptions {
            lines,
            resolution,
            ..Default::default()
        }
    }

    #[test]
    fn ball_passes() {
        let rep = check_cconvex(&Domain::unit_ball(2), &opts(40, 96)).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.witness);
        assert!(rep
            .lines
            .iter()
            .filter(|l| l.counted())
            .all(|l| l.connected && l.simply_connected));
    }

    #[test]
    fn annulus_fails_on_the_first_coordinate_line() {
        let d = Domain::annulus_product(0.5, 1.0, 1.0)
            .unwrap()
            .recentered(&[C64::new(0.75, 0.0), C64::new(0.0, 0.0)])
            .unwrap();
        let rep = check_cconvex(&d, &opts(20, 96)).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        let w = rep.witness.unwrap();
        assert_eq!(w.line, 0);
        assert_eq!(w.failure, LineFailure::NotSimplyConnected);
        assert!(w.stable);
    }

    #[test]
    fn csv_has_one_row_per_line() {
        let rep = check_cconvex(&Domain::unit_ball(2), &opts(5, 64)).unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert!(text.starts_with("line_id,a1_re,a1_im,a2_re,a2_im,b1_re"));
    }
}
