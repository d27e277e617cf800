//! Pointwise and polynomial Gleason decompositions.

use serde::{Deserialize, Serialize};

use crate::cvec::{self, CVec, C64};
use crate::error::{GleasonError, Result};
use crate::geometry::{tangent_frame, CollarCover, Domain};
use crate::oracle::HolomorphicOracle;
use crate::planner::{plan_path, PathPlan, PlanKind, PlanOptions};
use crate::polynomial::{fit_approximant, Polynomial};

use super::cauchy::cauchy_directional_derivative;
use super::integral::{integrate_i, IntegralOptions};
use super::linalg::cramer_solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    DirectContour,
    SySystem,
    ApproximantLimit,
    /// Closed form for polynomials, otherwise direct contour outside the
    /// collar and the recovery system inside it.
    Auto,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "closed_form" => Method::ClosedForm,
            "direct_contour" => Method::DirectContour,
            "sy_system" => Method::SySystem,
            "approximant_limit" => Method::ApproximantLimit,
            "auto" => Method::Auto,
            _ => return Err(GleasonError::InvalidInput(format!("unknown method `{s}`"))),
        })
    }

    /// Advertised bound on `|f(z) - sum z_i T_i(f)(z)| / (1 + |f(z)|)`.
    pub fn tolerance(self) -> f64 {
        match self {
            Method::ClosedForm => 1e-10,
            Method::DirectContour | Method::SySystem | Method::Auto => 1e-7,
            Method::ApproximantLimit => 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantOptions {
    pub min_degree: u32,
    pub max_degree: u32,
    /// Fitting points; zero means four per unknown coefficient, at least 400.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ApproximantOptions {
    fn default() -> Self {
        ApproximantOptions {
            min_degree: 2,
            max_degree: 12,
            samples: 0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecomposeOptions {
    pub method: Option<Method>,
    pub integral: IntegralOptions,
    pub plan: PlanOptions,
    pub approximant: ApproximantOptions,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub plan_kind: Option<PlanKind>,
    pub determinant: Option<f64>,
    pub quadrature_error: f64,
    pub circle_discrepancy: f64,
    pub panels: usize,
    pub collar_patch: Option<usize>,
    pub collar_s: Option<f64>,
    pub approximant_degree: Option<u32>,
    pub approximant_tail: Option<f64>,
    pub fit_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    /// The point in internal coordinates (Gleason point at the origin).
    pub point: CVec,
    pub values: CVec,
    pub f_value: C64,
    pub residual: f64,
    pub tolerance: f64,
    pub method: Method,
    pub passed: bool,
    pub diagnostics: Diagnostics,
}

/// `P(z) - P(p) = sum_i (z_i - p_i) f_i(z)` as polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialDecomposition {
    pub factors: Vec<Polynomial>,
    /// `P - P(p) - sum (z_i - p_i) f_i`; zero up to rounding.
    pub remainder: Polynomial,
    /// Largest remainder coefficient relative to the largest coefficient of P.
    pub relative_remainder: f64,
}

/// Closed-form division of a polynomial at the point `p` (original
/// coordinates of the domain).
pub fn decompose_polynomial(
    poly: &Polynomial,
    p: &[C64],
    domain: &Domain,
) -> Result<PolynomialDecomposition> {
    if p.len() != poly.dim() || p.len() != domain.dim() {
        return Err(GleasonError::DimensionMismatch {
            expected: poly.dim(),
            got: p.len(),
        });
    }
    if !domain.contains(&domain.from_original(p)) {
        return Err(GleasonError::PointOutsideDomain {
            at: cvec::fmt_point(p),
        });
    }
    let n = poly.dim();
    let factors: Vec<Polynomial> = (0..n)
        .map(|i| poly.leibenzon_at(i, p))
        .collect::<Result<_>>()?;
    let mut rem = poly - &Polynomial::constant(n, poly.eval(p)?);
    for (i, fi) in factors.iter().enumerate() {
        let zi = &Polynomial::coordinate(n, i) - &Polynomial::constant(n, p[i]);
        rem = &rem - &(&zi * fi);
    }
    let scale = poly.max_coefficient_norm().max(f64::MIN_POSITIVE);
    Ok(PolynomialDecomposition {
        relative_remainder: rem.max_coefficient_norm() / scale,
        factors,
        remainder: rem,
    })
}

fn require_vanishing(f: &dyn HolomorphicOracle) -> Result<()> {
    let f0 = f.eval(&cvec::zeros(f.dim()));
    if f0.norm() > 1e-12 {
        return Err(GleasonError::NonVanishing {
            constant: format!("{f0}"),
        });
    }
    Ok(())
}

/// `T_i(f)(z)` for i = 1..n by the requested method, with the identity
/// residual `|f(z) - sum z_i T_i(f)(z)|` checked against the method's
/// advertised tolerance. Points are internal coordinates.
pub fn decompose_at_point(
    f: &dyn HolomorphicOracle,
    z: &[C64],
    domain: &Domain,
    cover: &CollarCover,
    opts: &DecomposeOptions,
) -> Result<DecompositionReport> {
    let n = domain.dim();
    if z.len() != n || f.dim() != n {
        return Err(GleasonError::DimensionMismatch {
            expected: n,
            got: z.len(),
        });
    }
    require_vanishing(f)?;
    if domain.r(z) > domain.boundary_tolerance() {
        return Err(GleasonError::PointOutsideDomain {
            at: cvec::fmt_point(&domain.to_original(z)),
        });
    }
    let requested = opts.method.unwrap_or(Method::Auto);
    let mut diag = Diagnostics::default();

    let (values, method) = if cvec::norm(z) == 0.0 {
        (
            derivatives_at_origin(f, domain, opts, &mut diag)?,
            requested,
        )
    } else {
        let method = match requested {
            Method::Auto if f.as_polynomial().is_some() => Method::ClosedForm,
            Method::Auto => {
                if cover.membership(domain, z)?.is_some() {
                    Method::SySystem
                } else {
                    Method::DirectContour
                }
            }
            m => m,
        };
        let values = match method {
            Method::ClosedForm => closed_form(f, z)?,
            Method::DirectContour => direct_contour(f, z, domain, cover, opts, &mut diag)?,
            Method::SySystem => sy_system(f, z, domain, cover, opts, &mut diag)?,
            Method::ApproximantLimit => approximant_limit(f, z, domain, opts, &mut diag)?,
            Method::Auto => unreachable!("resolved above"),
        };
        (values, method)
    };
    let fz = f.eval(z);
    let sum: C64 = z.iter().zip(&values).map(|(a, b)| a * b).sum();
    let residual = (fz - sum).norm();
    let tolerance = method.tolerance() * (1.0 + fz.norm());
    Ok(DecompositionReport {
        point: z.to_vec(),
        values,
        f_value: fz,
        residual,
        tolerance,
        method,
        passed: residual <= tolerance,
        diagnostics: diag,
    })
}

fn closed_form(f: &dyn HolomorphicOracle, z: &[C64]) -> Result<CVec> {
    let p = f.as_polynomial().ok_or(GleasonError::MethodInapplicable {
        method: "closed_form".into(),
        reason: "the function is not a polynomial".into(),
    })?;
    p.leibenzon_all()?.iter().map(|t| t.eval(z)).collect()
}

/// `T_i(f)(0) = D_i f(0)`.
fn derivatives_at_origin(
    f: &dyn HolomorphicOracle,
    domain: &Domain,
    opts: &DecomposeOptions,
    diag: &mut Diagnostics,
) -> Result<CVec> {
    let n = domain.dim();
    if let Some(p) = f.as_polynomial() {
        return (0..n).map(|i| Ok(p.partial(i)?.constant_term())).collect();
    }
    let zero = cvec::zeros(n);
    let radius = 0.5 * domain.boundary_distance(&zero);
    (0..n)
        .map(|i| {
            let c = cauchy_directional_derivative(
                f,
                &zero,
                &cvec::unit(n, i),
                radius,
                opts.integral.circle_points,
                Some(domain),
            )?;
            diag.circle_discrepancy = diag.circle_discrepancy.max(c.discrepancy);
            Ok(c.value)
        })
        .collect()
}

fn record_plan(plan: &PathPlan, diag: &mut Diagnostics) {
    diag.plan_kind = Some(plan.kind);
    if let Some(c) = &plan.gamma2 {
        diag.collar_patch = Some(c.patch);
        diag.collar_s = Some(c.s_z);
    }
}

fn direct_contour(
    f: &dyn HolomorphicOracle,
    z: &[C64],
    domain: &Domain,
    cover: &CollarCover,
    opts: &DecomposeOptions,
    diag: &mut Diagnostics,
) -> Result<CVec> {
    let plan = plan_path(domain, cover, z, &opts.plan)?;
    if plan.kind == PlanKind::Collar {
        return Err(GleasonError::MethodInapplicable {
            method: "direct_contour".into(),
            reason:
                "the point lies in the boundary collar, where coordinate circles leave the domain"
                    .into(),
        });
    }
    record_plan(&plan, diag);
    contour_values(f, &plan, domain, opts, diag)
}

/// `T_i(f)(z) = int_gamma D_i f(lambda z) d lambda` along an interior plan.
pub(crate) fn contour_values(
    f: &dyn HolomorphicOracle,
    plan: &PathPlan,
    domain: &Domain,
    opts: &DecomposeOptions,
    diag: &mut Diagnostics,
) -> Result<CVec> {
    let n = domain.dim();
    (0..n)
        .map(|i| {
            let est = integrate_i(f, plan, &cvec::unit(n, i), domain, &opts.integral)?;
            diag.quadrature_error += est.quad_error;
            diag.circle_discrepancy = diag.circle_discrepancy.max(est.circle_discrepancy);
            diag.panels += est.panels;
            Ok(est.value)
        })
        .collect()
}

fn sy_system(
    f: &dyn HolomorphicOracle,
    z: &[C64],
    domain: &Domain,
    cover: &CollarCover,
    opts: &DecomposeOptions,
    diag: &mut Diagnostics,
) -> Result<CVec> {
    let plan = plan_path(domain, cover, z, &opts.plan)?;
    if plan.kind != PlanKind::Collar {
        return Err(GleasonError::MethodInapplicable {
            method: "sy_system".into(),
            reason: "the point is not in the boundary collar".into(),
        });
    }
    record_plan(&plan, diag);
    let (values, det) = sy_values(f, &plan, domain, opts, diag)?;
    diag.determinant = Some(det);
    Ok(values)
}

/// Solves the system with rows `e^1(w) .. e^{n-1}(w), z` and right-hand
/// side `I_1(z) .. I_{n-1}(z), f(z)`.
pub(crate) fn sy_values(
    f: &dyn HolomorphicOracle,
    plan: &PathPlan,
    domain: &Domain,
    opts: &DecomposeOptions,
    diag: &mut Diagnostics,
) -> Result<(CVec, f64)> {
    let c = plan.gamma2.as_ref().expect("collar plan");
    let frame = tangent_frame(domain, &c.w)?;
    let mut rows = Vec::with_capacity(domain.dim());
    let mut rhs = Vec::with_capacity(domain.dim());
    for e in &frame.tangents {
        let est = integrate_i(f, plan, e, domain, &opts.integral)?;
        diag.quadrature_error += est.quad_error;
        diag.circle_discrepancy = diag.circle_discrepancy.max(est.circle_discrepancy);
        diag.panels += est.panels;
        rows.push(e.clone());
        rhs.push(est.value);
    }
    rows.push(plan.z.clone());
    rhs.push(f.eval(&plan.z));
    solve_sy(&rows, &rhs)
}

/// The recovery system by Cramer's rule; `rows` are the tangent vectors
/// followed by z.
pub fn solve_sy(rows: &[CVec], rhs: &[C64]) -> Result<(CVec, f64)> {
    cramer_solve(rows, rhs)
}

/// Tube radius relative to |z| for the approximant fitting set.
const TUBE_RADIUS: f64 = 0.3;

fn approximant_limit(
    f: &dyn HolomorphicOracle,
    z: &[C64],
    domain: &Domain,
    opts: &DecomposeOptions,
    diag: &mut Diagnostics,
) -> Result<CVec> {
    use rand::{Rng, SeedableRng};
    let ao = &opts.approximant;
    let n = domain.dim();
    let unknowns = crate::polynomial::multi_indices(n, 1, ao.max_degree).len();
    let count = if ao.samples == 0 {
        (4 * unknowns).max(400)
    } else {
        ao.samples
    };
    // fitting set: interior points of a tube around the segment [0, z], the
    // only part of the domain the closed form reads
    let radius = TUBE_RADIUS * cvec::norm(z) + 0.02 * domain.diameter();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ao.seed);
    let mut pts = Vec::with_capacity(count);
    let mut tries = 0;
    while pts.len() < count && tries < 1000 * count {
        tries += 1;
        let offset: CVec = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if cvec::norm(&offset) > 1.0 {
            continue;
        }
        let lam = rng.gen_range(0.0..=1.0);
        let x = cvec::axpy(&cvec::scale_re(z, lam), C64::new(radius, 0.0), &offset);
        if domain.contains(&x) {
            pts.push(x);
        }
    }
    let mut prev: Option<CVec> = None;
    let mut tail = f64::INFINITY;
    let mut last = None;
    for d in ao.min_degree..=ao.max_degree {
        let fit = match fit_approximant(f, &pts, d) {
            Ok(fit) => fit,
            Err(GleasonError::IllConditioned { .. }) if last.is_some() => break,
            Err(e) => return Err(e),
        };
        let vals: CVec = fit
            .poly
            .leibenzon_all()?
            .iter()
            .map(|t| t.eval_unchecked(z))
            .collect();
        if let Some(p) = &prev {
            tail = cvec::dist(p, &vals);
        }
        diag.approximant_degree = Some(d);
        diag.fit_residual = Some(fit.residual_sup);
        prev = Some(vals.clone());
        last = Some(vals);
    }
    diag.approximant_tail = Some(tail);
    last.ok_or_else(|| GleasonError::InvalidInput("empty approximant degree range".into()))
}
