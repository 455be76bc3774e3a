use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use hlsext_core::solver::default_init;
use hlsext_core::{
    ball_constant_quotient, solve_subcritical, BoundaryFunction, BoundaryGrid, DomainSpec, SolverConfig,
    SolverReport, ZonalBasis, ZonalProfile,
};
use serde::Serialize;

use crate::config::ConfigFile;
use crate::{write_file, CliError, EXIT_NOT_CONVERGED, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Ball,
    Annulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Init {
    /// Constant on the ball, two-level `(1, a)` on the annulus.
    Default,
    /// Seeded values in `[0.5, 1.5)` at every node.
    Random,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub domain: Option<DomainKind>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Inner radius of the annulus.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub damping: Option<f64>,
    /// Gauss–Gegenbauer nodes per boundary sphere.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub radial_order: Option<usize>,
    #[arg(long)]
    pub grading: Option<f64>,
    #[arg(long, value_enum)]
    pub init: Option<Init>,
    /// Inner value of the two-level start on the annulus.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON report path; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct SolveOutput<'a> {
    #[serde(flatten)]
    report: &'a SolverReport,
    /// Quotient of constant data on the unit ball at the same exponent.
    ball_baseline: f64,
    margin: f64,
    seed: u64,
}

pub fn run(args: &SolveArgs, config: &ConfigFile) -> Result<i32, CliError> {
    let kind = config.pick_enum(args.domain, "domain", DomainKind::Ball)?;
    let n = config.pick(args.n, "n", 3)?;
    let domain = match kind {
        DomainKind::Ball => DomainSpec::ball(n)?,
        DomainKind::Annulus => DomainSpec::annulus(n, config.require(args.r, "r")?)?,
    };
    let defaults = SolverConfig::new(0.0);
    let grid = BoundaryGrid {
        nodes_per_sphere: config.pick(args.nodes, "nodes", defaults.grid.nodes_per_sphere)?,
        radial_order: config.pick(args.radial_order, "radial_order", defaults.grid.radial_order)?,
        grading: config.pick(args.grading, "grading", defaults.grid.grading)?,
    };
    let solver = SolverConfig {
        q: config.require(args.q, "q")?,
        tol: config.pick(args.tol, "tol", defaults.tol)?,
        max_iter: config.pick(args.max_iter, "max_iter", defaults.max_iter)?,
        damping: config.pick(args.damping, "damping", defaults.damping)?,
        grid,
    };
    solver.validate(n)?;
    let seed = config.pick(args.seed, "seed", 0)?;
    let init = match config.pick_enum(args.init, "init", Init::Default)? {
        Init::Default => match (kind, args.a.or(config.get("a")?)) {
            (DomainKind::Annulus, Some(a)) => BoundaryFunction::two_level(domain, a)?,
            _ => default_init(&domain)?,
        },
        Init::Random => {
            let basis = Arc::new(ZonalBasis::new(n, grid.nodes_per_sphere)?);
            BoundaryFunction::zonal(ZonalProfile::random_positive(domain, basis, seed)?)
        }
    };
    let report = solve_subcritical(&domain, &solver, &init)?;
    let ball_baseline = ball_constant_quotient(n, solver.q)?;
    let out = SolveOutput { report: &report, ball_baseline, margin: report.quotient - ball_baseline, seed };
    let mut json = serde_json::to_vec_pretty(&out)?;
    json.push(b'\n');
    match args.output.clone().or_else(|| config.raw("output").map(PathBuf::from)) {
        Some(path) => {
            write_file(&path, &json)?;
            eprintln!(
                "q={} quotient={:.12} ball={:.12} iterations={} converged={} -> {}",
                solver.q,
                report.quotient,
                ball_baseline,
                report.iterations,
                report.converged,
                path.display()
            );
        }
        None => print!("{}", String::from_utf8_lossy(&json)),
    }
    Ok(if report.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}
