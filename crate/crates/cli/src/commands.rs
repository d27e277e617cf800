use std::path::Path;
use std::sync::Arc;

use gleason::cconvex::{check_cconvex, CConvexOptions, LineFailure, Verdict};
use gleason::cvec::{self, CVec, C64};
use gleason::geometry::{
    collar_cover, grange_seam_points, load_domain, tangent_frame, verify_lemma1, verify_lemma1_on,
    CollarCover, CoverParams, Domain, Lemma1Bin, Lemma1Report,
};
use gleason::operators::{
    approach_boundary, build_k_sample, continuity_experiment, decompose_at_point, estimate_k,
    ApproachRow, ContinuityRow, DecomposeOptions, DecompositionReport, KSampleOptions, Method,
};
use gleason::oracle::{parse_oracle, HolomorphicOracle, Recentered};
use gleason::polynomial::{Polynomial, PolynomialJson};
use gleason::GleasonError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult, Context};
use crate::output::Output;

pub fn read_domain(path: &Path) -> CliResult<Domain> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_domain(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// `poly:<expr>`, `rational:<name>`, or a path to a polynomial JSON file.
pub fn read_function(spec: &str, n: usize) -> CliResult<Arc<dyn HolomorphicOracle>> {
    if spec.ends_with(".json") {
        let text = std::fs::read_to_string(spec).map_err(|source| CliError::Io {
            path: spec.to_string(),
            source,
        })?;
        let json: PolynomialJson =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        let p =
            Polynomial::from_json(&json).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        if p.dim() != n {
            return Err(CliError::Input(format!(
                "{spec}: polynomial has {} variables, domain has {n}",
                p.dim()
            )));
        }
        return Ok(Arc::new(p));
    }
    parse_oracle(spec, n).map_err(|e| CliError::Input(e.to_string()))
}

/// `re1,im1,re2,im2,...` with 2n numbers.
pub fn parse_point(text: &str, n: usize) -> CliResult<CVec> {
    let nums: Vec<f64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("point `{text}`: `{t}` is not a number")))
        })
        .collect::<CliResult<_>>()?;
    if nums.len() != 2 * n {
        return Err(CliError::Input(format!(
            "point `{text}` has {} numbers, expected {} (real and imaginary part per coordinate)",
            nums.len(),
            2 * n
        )));
    }
    Ok(nums.chunks(2).map(|c| C64::new(c[0], c[1])).collect())
}

/// `a-b` or a comma list.
pub fn parse_range(text: &str) -> CliResult<Vec<u32>> {
    let bad = || CliError::Input(format!("range `{text}` must look like `1-15` or `2,4,8`"));
    if let Some((a, b)) = text.split_once('-') {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}

#[derive(Debug, Serialize)]
pub struct CoverSummary {
    pub patches: usize,
    pub sigma: f64,
    pub clearance: f64,
    pub unverified: usize,
    pub uncovered: usize,
    pub lenient: bool,
}

/// Strict cover first; domains whose boundary defeats it (corners, edges)
/// get a lenient cover that flags the patches it could not verify.
pub fn build_cover(domain: &Domain, seed: u64) -> CliResult<(CollarCover, CoverSummary)> {
    let strict = CoverParams {
        seed,
        ..CoverParams::default()
    };
    let (cover, lenient) = match collar_cover(domain, &strict) {
        Ok(c) => (c, false),
        Err(GleasonError::CoverFailure(_)) => {
            let params = CoverParams {
                budget: 300,
                sigma_accept: 0.05,
                ..strict
            }
            .lenient();
            (collar_cover(domain, &params).at("collar cover")?, true)
        }
        Err(e) => return Err(CliError::from_library(e, "collar cover")),
    };
    let summary = CoverSummary {
        patches: cover.patches.len(),
        sigma: cover.sigma,
        clearance: cover.clearance,
        unverified: cover.unverified(),
        uncovered: cover.uncovered,
        lenient,
    };
    Ok((cover, summary))
}

fn random_interior(domain: &Domain, rng: &mut ChaCha8Rng) -> CVec {
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

pub struct DecomposeArgs<'a> {
    pub domain: &'a Path,
    pub function: &'a str,
    pub points: &'a [String],
    pub sample: Option<usize>,
    pub method: &'a str,
    pub tolerance: Option<f64>,
    pub options: DecomposeOptions,
    pub seed: u64,
}

#[derive(Serialize)]
struct PointReport {
    index: usize,
    /// `report.point` is rewritten to original coordinates.
    #[serde(flatten)]
    report: DecompositionReport,
}

#[derive(Serialize)]
struct DecomposeOutput {
    command: &'static str,
    domain: String,
    gleason_point: CVec,
    function: String,
    method: Method,
    seed: u64,
    cover: CoverSummary,
    all_passed: bool,
    reports: Vec<PointReport>,
}

pub fn decompose(args: DecomposeArgs, out: &Output) -> CliResult<()> {
    let domain = read_domain(args.domain)?;
    let n = domain.dim();
    let f = read_function(args.function, n)?;
    let f =
        Recentered::new(f, domain.offset().to_vec()).map_err(|e| CliError::Input(e.to_string()))?;
    let method = Method::parse(args.method).map_err(|e| CliError::Input(e.to_string()))?;
    let mut points: Vec<CVec> = args
        .points
        .iter()
        .map(|p| parse_point(p, n).map(|z| domain.from_original(&z)))
        .collect::<CliResult<_>>()?;
    if let Some(k) = args.sample {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        points.extend((0..k).map(|_| random_interior(&domain, &mut rng)));
    }
    if points.is_empty() {
        return Err(CliError::Input(
            "decompose needs --point or --sample".into(),
        ));
    }
    for (k, z) in points.iter().enumerate() {
        if domain.r(z) > domain.boundary_tolerance() {
            return Err(CliError::Input(format!(
                "point {k} {} lies outside the domain",
                cvec::fmt_point(&domain.to_original(z))
            )));
        }
    }
    let (cover, summary) = build_cover(&domain, args.seed)?;
    let opts = DecomposeOptions {
        method: Some(method),
        ..args.options
    };
    let reports: Vec<DecompositionReport> = points
        .par_iter()
        .enumerate()
        .map(|(k, z)| decompose_at_point(&f, z, &domain, &cover, &opts).at(&format!("point {k}")))
        .collect::<CliResult<_>>()?;
    let mut failing = None;
    let reports: Vec<PointReport> = reports
        .into_iter()
        .enumerate()
        .map(|(index, mut report)| {
            if let Some(t) = args.tolerance {
                report.tolerance = t * (1.0 + report.f_value.norm());
                report.passed = report.residual <= report.tolerance;
            }
            if !report.passed && failing.is_none() {
                failing = Some((index, report.residual, report.tolerance));
            }
            report.point = domain.to_original(&report.point);
            PointReport { index, report }
        })
        .collect();
    let doc = DecomposeOutput {
        command: "decompose",
        domain: domain.name().to_string(),
        gleason_point: domain.offset().to_vec(),
        function: args.function.to_string(),
        method,
        seed: args.seed,
        cover: summary,
        all_passed: failing.is_none(),
        reports,
    };
    out.json("decomposition.json", &doc)?;
    out.csv("decomposition.csv", |w| {
        use std::io::Write;
        writeln!(w, "point_id,coordinate,t_re,t_im,residual,passed")?;
        for r in &doc.reports {
            for (i, t) in r.report.values.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{:.17e},{:.17e},{:.17e},{}",
                    r.index,
                    i + 1,
                    t.re,
                    t.im,
                    r.report.residual,
                    r.report.passed
                )?;
            }
        }
        Ok(())
    })?;
    match failing {
        Some((k, res, tol)) => Err(CliError::assertion(
            format!("decomposition.csv point_id {k}"),
            format!("division residual {res:e} exceeds tolerance {tol:e}"),
        )),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct WitnessOut {
    line: usize,
    failure: LineFailure,
    stable: bool,
    base: CVec,
    direction: CVec,
}

#[derive(Serialize)]
struct CheckDomainOutput {
    command: &'static str,
    domain: String,
    verdict: Verdict,
    resolution: usize,
    lines: usize,
    counted: usize,
    empty: usize,
    flagged: usize,
    seed: u64,
    witness: Option<WitnessOut>,
}

pub fn check_domain(
    domain: &Path,
    lines: usize,
    resolution: usize,
    seed: u64,
    out: &Output,
) -> CliResult<()> {
    let domain = read_domain(domain)?;
    let opts = CConvexOptions {
        lines,
        resolution,
        seed,
        ..Default::default()
    };
    let rep = check_cconvex(&domain, &opts).map_err(|e| CliError::Input(e.to_string()))?;
    out.csv("cconvex_lines.csv", |w| rep.write_csv(w))?;
    let witness = rep.witness.as_ref().map(|w| {
        let l = &rep.lines[w.line];
        WitnessOut {
            line: w.line,
            failure: w.failure,
            stable: w.stable,
            base: domain.to_original(&l.base),
            direction: l.direction.clone(),
        }
    });
    out.json(
        "cconvex.json",
        &CheckDomainOutput {
            command: "check-domain",
            domain: domain.name().to_string(),
            verdict: rep.verdict,
            resolution,
            lines: rep.lines.len(),
            counted: rep.counted,
            empty: rep.empty,
            flagged: rep.flagged,
            seed,
            witness,
        },
    )
}

pub struct EstimateArgs<'a> {
    pub domain: &'a Path,
    pub approach: bool,
    pub degrees: Vec<u32>,
    pub trials: usize,
    pub center: Option<&'a str>,
    pub radius: f64,
    pub ks: Vec<u32>,
    pub degree: u32,
    pub boundary_point: Option<&'a str>,
    pub seed: u64,
}

#[derive(Serialize)]
struct DegreeMax {
    degree: u32,
    max_ratio: f64,
}

#[derive(Serialize)]
struct EstimateOutput {
    command: &'static str,
    domain: String,
    center: CVec,
    radius: f64,
    b_points: usize,
    s_points: usize,
    trials: usize,
    per_degree: Vec<DegreeMax>,
    log_slope: f64,
    summary: f64,
    seed: u64,
}

#[derive(Serialize)]
struct ApproachOutput {
    command: &'static str,
    domain: String,
    boundary_point: CVec,
    degree: u32,
    trials: usize,
    rows: Vec<ApproachRow>,
    strictly_increasing: bool,
    seed: u64,
}

fn write_approach(out: &Output, name: &str, rows: &[ApproachRow]) -> CliResult<()> {
    out.csv(name, |w| {
        use std::io::Write;
        writeln!(w, "k,distance,radius,ratio")?;
        for r in rows {
            writeln!(
                w,
                "{},{:.17e},{:.17e},{:.17e}",
                r.k, r.distance, r.radius, r.ratio
            )?;
        }
        Ok(())
    })
}

fn approach_target(domain: &Domain, given: Option<&str>) -> CliResult<CVec> {
    match given {
        Some(text) => {
            let w = domain.from_original(&parse_point(text, domain.dim())?);
            domain
                .project_to_boundary(&w)
                .map_err(|e| CliError::Input(e.to_string()))
        }
        None => domain
            .ray_boundary(&cvec::zeros(domain.dim()), &cvec::unit(domain.dim(), 0))
            .ok_or_else(|| CliError::Input("no boundary point on the ray along +x_1".into())),
    }
}

pub fn estimate(args: EstimateArgs, out: &Output) -> CliResult<()> {
    let domain = read_domain(args.domain)?;
    let (cover, _) = build_cover(&domain, args.seed)?;
    let sample_opts = KSampleOptions {
        seed: args.seed,
        ..KSampleOptions::default()
    };
    if args.approach {
        let w = approach_target(&domain, args.boundary_point)?;
        let rows = approach_boundary(
            &domain,
            &cover,
            &w,
            &args.ks,
            args.degree,
            args.trials,
            &sample_opts,
            args.seed,
        )
        .at("approach table")?;
        write_approach(out, "approach.csv", &rows)?;
        return out.json(
            "approach.json",
            &ApproachOutput {
                command: "estimate-k",
                domain: domain.name().to_string(),
                boundary_point: domain.to_original(&w),
                degree: args.degree,
                trials: args.trials,
                strictly_increasing: rows.windows(2).all(|p| p[1].ratio > p[0].ratio),
                rows,
                seed: args.seed,
            },
        );
    }
    let center = match args.center {
        Some(text) => domain.from_original(&parse_point(text, domain.dim())?),
        None => cvec::zeros(domain.dim()),
    };
    let sample =
        build_k_sample(&domain, &cover, &center, args.radius, &sample_opts).at("test set")?;
    let table = estimate_k(&sample, domain.dim(), &args.degrees, args.trials, args.seed)
        .at("ratio table")?;
    out.csv("estimate_k.csv", |w| table.write_csv(w))?;
    out.json(
        "estimate_k.json",
        &EstimateOutput {
            command: "estimate-k",
            domain: domain.name().to_string(),
            center: domain.to_original(&center),
            radius: args.radius,
            b_points: sample.b.len(),
            s_points: sample.s.len(),
            trials: args.trials,
            per_degree: table
                .per_degree
                .iter()
                .map(|&(degree, max_ratio)| DegreeMax { degree, max_ratio })
                .collect(),
            log_slope: table.log_slope,
            summary: table.summary,
            seed: args.seed,
        },
    )
}

#[derive(Serialize)]
struct Lemma1Summary {
    samples: usize,
    violations: usize,
    worst_margin: Option<f64>,
    margin_monotone: bool,
    bins: Vec<Lemma1Bin>,
}

impl From<&Lemma1Report> for Lemma1Summary {
    fn from(r: &Lemma1Report) -> Self {
        Lemma1Summary {
            samples: r.samples,
            violations: r.violations,
            worst_margin: r.worst_margin.is_finite().then_some(r.worst_margin),
            margin_monotone: r.margin_monotone(),
            bins: r
                .bins
                .iter()
                .map(|b| Lemma1Bin {
                    min_margin: if b.count == 0 { 0.0 } else { b.min_margin },
                    ..b.clone()
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct Lemma1Output {
    command: &'static str,
    domain: String,
    seed: u64,
    cover: CoverSummary,
    #[serde(flatten)]
    summary: Lemma1Summary,
}

pub fn lemma1(domain: &Path, samples: usize, seed: u64, out: &Output) -> CliResult<()> {
    let domain = read_domain(domain)?;
    let (cover, summary) = build_cover(&domain, seed)?;
    let rep = verify_lemma1(&domain, &cover, samples, seed);
    out.csv("lemma1.csv", |w| rep.write_csv(w))?;
    out.json(
        "lemma1.json",
        &Lemma1Output {
            command: "lemma1",
            domain: domain.name().to_string(),
            seed,
            cover: summary,
            summary: Lemma1Summary::from(&rep),
        },
    )
}

pub struct ContinuityArgs<'a> {
    pub domain: &'a Path,
    pub function: &'a str,
    pub point: &'a str,
    pub direction: Option<&'a str>,
    pub ks: Vec<u32>,
    pub options: DecomposeOptions,
    pub seed: u64,
}

#[derive(Serialize)]
struct ContinuityOutput {
    command: &'static str,
    domain: String,
    function: String,
    point: CVec,
    direction: CVec,
    patch: usize,
    monotone: bool,
    final_delta: f64,
    decays_below_1e4: bool,
    rows: Vec<ContinuityRow>,
    seed: u64,
}

pub fn continuity(args: ContinuityArgs, out: &Output) -> CliResult<()> {
    let domain = read_domain(args.domain)?;
    let n = domain.dim();
    let f = read_function(args.function, n)?;
    let f =
        Recentered::new(f, domain.offset().to_vec()).map_err(|e| CliError::Input(e.to_string()))?;
    let z = domain.from_original(&parse_point(args.point, n)?);
    let (cover, _) = build_cover(&domain, args.seed)?;
    let u = match args.direction {
        Some(text) => cvec::normalized(&parse_point(text, n)?)
            .ok_or_else(|| CliError::Input("direction must be nonzero".into()))?,
        None => {
            let cp = cover
                .membership(&domain, &z)
                .at("membership")?
                .ok_or_else(|| CliError::Input("point is not in the boundary collar".into()))?;
            tangent_frame(&domain, &cp.w).at("tangent frame")?.tangents[0].clone()
        }
    };
    let rep = continuity_experiment(&f, &z, &u, &args.ks, &domain, &cover, &args.options)
        .at("continuity sequence")?;
    out.csv("continuity.csv", |w| rep.write_csv(w))?;
    out.json(
        "continuity.json",
        &ContinuityOutput {
            command: "continuity",
            domain: domain.name().to_string(),
            function: args.function.to_string(),
            point: domain.to_original(&z),
            direction: u,
            patch: rep.patch,
            monotone: rep.monotone,
            final_delta: rep.final_delta,
            decays_below_1e4: rep.decays_below(1e-4),
            rows: rep.rows,
            seed: args.seed,
        },
    )
}

#[derive(Serialize)]
struct GrangeOutput {
    command: &'static str,
    domain: String,
    seed: u64,
    cover: CoverSummary,
    uniform: Lemma1Summary,
    seam: Lemma1Summary,
    approach_degree: u32,
    approach: Vec<ApproachRow>,
    approach_strictly_increasing: bool,
}

/// Collar membership probes on uniform and seam-clustered boundary samples,
/// and the key estimate along balls approaching the non-smooth point (1, 0).
pub fn grange(
    domain: Option<&Path>,
    samples: usize,
    trials: usize,
    seed: u64,
    out: &Output,
) -> CliResult<()> {
    let domain = match domain {
        Some(p) => read_domain(p)?,
        None => Domain::grange(0.5).map_err(|e| CliError::Input(e.to_string()))?,
    };
    if !matches!(domain.kind(), gleason::geometry::DomainKind::Grange) {
        return Err(CliError::Input(format!(
            "domain `{}` is not of kind grange",
            domain.name()
        )));
    }
    let (cover, summary) = build_cover(&domain, seed)?;
    let uniform = verify_lemma1(&domain, &cover, samples, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seam_points = grange_seam_points(2000, 1e-8, 1e-2, &mut rng);
    let seam = verify_lemma1_on(&domain, &cover, &seam_points, samples, seed);
    let ks: Vec<u32> = (2..=8).collect();
    let w = domain.from_original(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let sample_opts = KSampleOptions {
        seed,
        ..KSampleOptions::default()
    };
    let rows = approach_boundary(&domain, &cover, &w, &ks, 10, trials, &sample_opts, seed)
        .at("approach table")?;
    out.csv("grange_lemma1_uniform.csv", |w| uniform.write_csv(w))?;
    out.csv("grange_lemma1_seam.csv", |w| seam.write_csv(w))?;
    write_approach(out, "grange_approach.csv", &rows)?;
    out.json(
        "grange.json",
        &GrangeOutput {
            command: "grange",
            domain: domain.name().to_string(),
            seed,
            cover: summary,
            uniform: Lemma1Summary::from(&uniform),
            seam: Lemma1Summary::from(&seam),
            approach_degree: 10,
            approach_strictly_increasing: rows.windows(2).all(|p| p[1].ratio > p[0].ratio),
            approach: rows,
        },
    )
}
