//! `gleason`: batch front end for decompositions, ℂ-convexity certificates,
//! and the numerical experiments.

mod commands;
mod error;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gleason::operators::{DecomposeOptions, IntegralOptions, QuadOptions};

use error::{CliError, CliResult};
use output::Output;

#[derive(Parser)]
#[command(
    name = "gleason",
    version,
    about = "Gleason decompositions and their numerical certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Domain spec (JSON).
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for every random choice of the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Tolerances {
    /// Nodes per derivative circle.
    #[arg(long)]
    circle_points: Option<usize>,
    /// Relative tolerance of the adaptive path quadrature.
    #[arg(long)]
    quad_tol: Option<f64>,
}

impl Tolerances {
    fn options(&self) -> DecomposeOptions {
        let mut integral = IntegralOptions::default();
        if let Some(m) = self.circle_points {
            integral.circle_points = m;
        }
        if let Some(t) = self.quad_tol {
            integral.quad = QuadOptions {
                tol: t,
                ..integral.quad
            };
        }
        DecomposeOptions {
            integral,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// T_i(f)(z) at the given points.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// `poly:<expr>`, `rational:<name>`, or a polynomial JSON file.
        #[arg(long = "f")]
        function: String,
        /// Point as `re1,im1,re2,im2,...` in original coordinates; repeatable.
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
        /// Additional random interior points.
        #[arg(long)]
        sample: Option<usize>,
        /// auto, closed_form, direct_contour, sy_system, approximant_limit.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Override of the relative division-residual tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        tolerances: Tolerances,
    },
    /// ℂ-convexity certificate from sampled complex lines.
    CheckDomain {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        lines: usize,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
    },
    /// Empirical constant of the key estimate.
    EstimateK {
        #[command(flatten)]
        common: Common,
        /// Balls approaching a boundary point instead of one fixed ball.
        #[arg(long)]
        approach_boundary: bool,
        #[arg(long, default_value = "1-15")]
        degrees: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Center of the test ball (original coordinates); default the Gleason point.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, default_value_t = 0.3)]
        radius: f64,
        /// Exponents k of the approach distances 2^-k.
        #[arg(long, default_value = "2-8")]
        ks: String,
        /// Polynomial degree of the approach ensemble.
        #[arg(long, default_value_t = 10)]
        degree: u32,
        /// Boundary point to approach; default the first boundary point along +x_1.
        #[arg(long, allow_hyphen_values = true)]
        boundary_point: Option<String>,
    },
    /// Collar disc membership probes.
    Lemma1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Deltas of I and T_i(f) along z + 2^-k u inside one collar patch.
    Continuity {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Default: the first tangent frame vector at the foot point.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
        #[arg(long, default_value = "3-12")]
        ks: String,
        #[command(flatten)]
        tolerances: Tolerances,
    },
    /// Experiments on the Grangé domain.
    Grange {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

fn need_domain(common: &Common) -> CliResult<&Path> {
    common
        .domain
        .as_deref()
        .ok_or_else(|| CliError::Input("--domain is required".into()))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Decompose {
            common,
            function,
            points,
            sample,
            method,
            tolerance,
            tolerances,
        } => {
            let out = Output::new(&common.out)?;
            commands::decompose(
                commands::DecomposeArgs {
                    domain: need_domain(&common)?,
                    function: &function,
                    points: &points,
                    sample,
                    method: &method,
                    tolerance,
                    options: tolerances.options(),
                    seed: common.seed,
                },
                &out,
            )
        }
        Command::CheckDomain {
            common,
            lines,
            resolution,
        } => {
            let out = Output::new(&common.out)?;
            commands::check_domain(need_domain(&common)?, lines, resolution, common.seed, &out)
        }
        Command::EstimateK {
            common,
            approach_boundary,
            degrees,
            trials,
            center,
            radius,
            ks,
            degree,
            boundary_point,
        } => {
            let out = Output::new(&common.out)?;
            commands::estimate(
                commands::EstimateArgs {
                    domain: need_domain(&common)?,
                    approach: approach_boundary,
                    degrees: commands::parse_range(&degrees)?,
                    trials,
                    center: center.as_deref(),
                    radius,
                    ks: commands::parse_range(&ks)?,
                    degree,
                    boundary_point: boundary_point.as_deref(),
                    seed: common.seed,
                },
                &out,
            )
        }
        Command::Lemma1 { common, samples } => {
            let out = Output::new(&common.out)?;
            commands::lemma1(need_domain(&common)?, samples, common.seed, &out)
        }
        Command::Continuity {
            common,
            function,
            point,
            direction,
            ks,
            tolerances,
        } => {
            let out = Output::new(&common.out)?;
            commands::continuity(
                commands::ContinuityArgs {
                    domain: need_domain(&common)?,
                    function: &function,
                    point: &point,
                    direction: direction.as_deref(),
                    ks: commands::parse_range(&ks)?,
                    options: tolerances.options(),
                    seed: common.seed,
                },
                &out,
            )
        }
        Command::Grange {
            common,
            samples,
            trials,
        } => {
            let out = Output::new(&common.out)?;
            commands::grange(common.domain.as_deref(), samples, trials, common.seed, &out)
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("GLEASON_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Input(format!(
            "GLEASON_THREADS must be a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|_| run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
