//! Sampled continuity of `I(z)` and `T_i(f)(z)` inside one collar patch.

use serde::{Deserialize, Serialize};

use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};
use crate::geometry::{tangent_frame, CollarCover, CollarPoint, Domain};
use crate::oracle::HolomorphicOracle;
use crate::planner::{plan_path, PlanOptions};

use super::decompose::{sy_values, DecomposeOptions, Diagnostics};
use super::integral::integrate_i;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub k: u32,
    /// `|z_n - z|`
    pub step: f64,
    /// `max_j |I_j(z_n) - I_j(z)|`
    pub delta_i: f64,
    /// `max_i |T_i(f)(z_n) - T_i(f)(z)|`
    pub delta_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub patch: usize,
    pub rows: Vec<ContinuityRow>,
    pub monotone: bool,
    pub final_delta: f64,
}

impl ContinuityReport {
    /// Monotone decay ending below `threshold`.
    pub fn decays_below(&self, threshold: f64) -> bool {
        self.monotone && self.final_delta < threshold
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,step,delta_i,delta_t")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{:.17e},{:.17e},{:.17e}",
                r.k, r.step, r.delta_i, r.delta_t
            )?;
        }
        Ok(())
    }
}

fn evaluate(
    f: &dyn HolomorphicOracle,
    z: &[C64],
    cp: CollarPoint,
    domain: &Domain,
    cover: &CollarCover,
    opts: &DecomposeOptions,
) -> Result<(CVec, CVec)> {
    let plan_opts = PlanOptions {
        collar: Some(cp.clone()),
        ..opts.plan.clone()
    };
    let plan = plan_path(domain, cover, z, &plan_opts)?;
    let frame = tangent_frame(domain, &cp.w)?;
    let integrals = frame
        .tangents
        .iter()
        .map(|e| Ok(integrate_i(f, &plan, e, domain, &opts.integral)?.value))
        .collect::<Result<CVec>>()?;
    let (t, _) = sy_values(f, &plan, domain, opts, &mut Diagnostics::default())?;
    Ok((integrals, t))
}

/// Deltas along `z_n = z + 2^{-k} u` for k in `ks`, all required to stay in
/// the patch that contains z. A zero `u` gives the constant sequence.
pub fn continuity_experiment(
    f: &dyn HolomorphicOracle,
    z: &[C64],
    u: &[C64],
    ks: &[u32],
    domain: &Domain,
    cover: &CollarCover,
    opts: &DecomposeOptions,
) -> Result<ContinuityReport> {
    let cp = cover.membership(domain, z)?.ok_or_else(|| {
        GleasonError::InvalidInput(format!(
            "{} is not in the boundary collar",
            cvec::fmt_point(&domain.to_original(z))
        ))
    })?;
    let patch = cp.patch;
    let (i0, t0) = evaluate(f, z, cp, domain, cover, opts)?;
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let h = 0.5f64.powi(k as i32);
        let zn = cvec::axpy(z, C64::new(h, 0.0), u);
        let cpn = cover
            .membership_in_patch(domain, patch, &zn)?
            .ok_or(GleasonError::PatchSeam { patch })?;
        let (i1, t1) = evaluate(f, &zn, cpn, domain, cover, opts)?;
        rows.push(ContinuityRow {
            k,
            step: cvec::dist(&zn, z),
            delta_i: cvec::sub(&i1, &i0)
                .iter()
                .map(|d| d.norm())
                .fold(0.0, f64::max),
            delta_t: cvec::sub(&t1, &t0)
                .iter()
                .map(|d| d.norm())
                .fold(0.0, f64::max),
        });
    }
    let worst = |r: &ContinuityRow| r.delta_i.max(r.delta_t);
    let monotone = rows.windows(2).all(|w| worst(&w[1]) <= worst(&w[0]));
    Ok(ContinuityReport {
        patch,
        final_delta: rows.last().map_or(0.0, worst),
        monotone,
        rows,
    })
}
