use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hlsext_core::closed_forms::{annulus_c2_slope, critical_exponent};
use hlsext_core::{
    c2_functional_with, optimize_two_level, DomainSpec, TwoLevelObjective, Verdict, VolumeOptions,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{log_grid, parse_n_list, parse_real_list, ConfigFile};
use crate::report::{write_csv, ReportRow};
use crate::{config_error, write_file, CliError, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Theorem {
    /// `C_2(A_r)` against the sharp ball constant.
    AnnulusRiesz,
    /// Best two-level duality surrogate of the Poisson quotient against its ball value.
    AnnulusPoisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Profile {
    Fast,
    Default,
    Fine,
}

impl Profile {
    fn options(self) -> VolumeOptions {
        let (radial_order, angular_order) = match self {
            Profile::Fast => (32, 16),
            Profile::Default => (64, 32),
            Profile::Fine => (128, 64),
        };
        VolumeOptions { radial_order, angular_order, ..VolumeOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub theorem: Option<Theorem>,
    /// Dimensions: `3`, `3,5` or `3..8`.
    #[arg(long)]
    pub n: Option<String>,
    /// Explicit comma-separated radii; overrides the log grid.
    #[arg(long, allow_hyphen_values = true)]
    pub r_grid: Option<String>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub r_points: Option<usize>,
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub a_points: Option<usize>,
    #[arg(long, value_enum)]
    pub profile: Option<Profile>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Defaults to JSON for a `.json` output and CSV otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    /// Largest grid radius with verdict `ExceedsBall`.
    pub r_star: Option<f64>,
    pub fitted_slope: Option<f64>,
    pub expected_slope: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SweepOutput<'a> {
    theorem: Theorem,
    profile: Profile,
    rows: &'a [ReportRow],
    summary: &'a [SweepSummary],
}

struct Plan {
    theorem: Theorem,
    ns: Vec<usize>,
    radii: Vec<f64>,
    a_range: (f64, f64, usize),
    profile: Profile,
    output: PathBuf,
    format: Format,
}

fn plan(args: &SweepArgs, config: &ConfigFile) -> Result<Plan, CliError> {
    let theorem = config.pick_enum(args.theorem, "theorem", Theorem::AnnulusRiesz)?;
    let ns = parse_n_list(&config.pick(args.n.clone(), "n", "3".to_string())?)?;
    let explicit = match &args.r_grid {
        Some(s) => Some(s.clone()),
        None => config.raw("r_grid").map(str::to_string),
    };
    let radii = match explicit {
        Some(s) => parse_real_list(&s)?,
        None => log_grid(
            config.pick(args.r_min, "r_min", 1e-3)?,
            config.pick(args.r_max, "r_max", 0.5)?,
            config.pick(args.r_points, "r_points", 40)?,
        )?,
    };
    if radii.is_empty() {
        return Err(config_error("the r grid is empty"));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(config_error(format!("radius {r} outside (0, 1)")));
    }
    let a_range = (
        config.pick(args.a_min, "a_min", 1.01)?,
        config.pick(args.a_max, "a_max", 10.0)?,
        config.pick(args.a_points, "a_points", 16)?,
    );
    if theorem == Theorem::AnnulusPoisson && !(a_range.0 > 0.0 && a_range.1 > a_range.0 && a_range.2 >= 3) {
        return Err(config_error("the a grid needs 0 < a_min < a_max and at least 3 points"));
    }
    let output = config.require(args.output.clone(), "output")?;
    let inferred = if output.extension().is_some_and(|e| e == "json") { Format::Json } else { Format::Csv };
    Ok(Plan {
        theorem,
        ns,
        radii,
        a_range,
        profile: config.pick_enum(args.profile, "profile", Profile::Default)?,
        format: config.pick_enum(args.format, "format", inferred)?,
        output,
    })
}

fn evaluate(plan: &Plan, n: usize, r: f64) -> Result<ReportRow, CliError> {
    let domain = DomainSpec::annulus(n, r)?;
    let opts = plan.profile.options();
    let q = critical_exponent(n);
    Ok(match plan.theorem {
        Theorem::AnnulusRiesz => ReportRow::from_quotient(n, r, 1.0, q, &c2_functional_with(&domain, &opts)?),
        Theorem::AnnulusPoisson => {
            let (lo, hi, points) = plan.a_range;
            let best = optimize_two_level(&domain, TwoLevelObjective::PoissonSurrogate, (lo, hi), points, &opts)?;
            ReportRow::from_quotient(n, r, best.a, q, &best.report)
        }
    })
}

/// Leading coefficient of `quotient/reference - 1` in `r^{n-1}`: a least-squares
/// line in `r` through the smallest radii whose excess is well above rounding.
fn fitted_slope(rows: &[&ReportRow]) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|row| row.margin / row.reference > 1e-9)
        .map(|row| (row.r, row.margin / row.reference / row.r.powi(row.n as i32 - 1)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.truncate(4);
    match pts.len() {
        0 => None,
        1 => Some(pts[0].1),
        k => {
            let kf = k as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / kf;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / kf;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            Some(my - sxy / sxx * mx)
        }
    }
}

fn summarize(theorem: Theorem, ns: &[usize], rows: &[ReportRow]) -> Vec<SweepSummary> {
    ns.iter()
        .map(|&n| {
            let mine: Vec<&ReportRow> = rows.iter().filter(|row| row.n == n).collect();
            let r_star = mine
                .iter()
                .filter(|row| row.verdict == Verdict::ExceedsBall)
                .map(|row| row.r)
                .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
            let (fitted_slope, expected_slope) = match theorem {
                Theorem::AnnulusRiesz => (fitted_slope(&mine), Some(annulus_c2_slope(n))),
                Theorem::AnnulusPoisson => (None, None),
            };
            SweepSummary { n, r_star, fitted_slope, expected_slope }
        })
        .collect()
}

pub fn run(args: &SweepArgs, config: &ConfigFile) -> Result<i32, CliError> {
    let plan = plan(args, config)?;
    let tasks: Vec<(usize, f64)> = plan.ns.iter().flat_map(|&n| plan.radii.iter().map(move |&r| (n, r))).collect();
    // collect keeps grid order whatever the completion order
    let rows: Vec<ReportRow> =
        tasks.par_iter().map(|&(n, r)| evaluate(&plan, n, r)).collect::<Result<_, _>>()?;
    let summary = summarize(plan.theorem, &plan.ns, &rows);

    let bytes = match plan.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows)?;
            buf
        }
        Format::Json => {
            let out = SweepOutput { theorem: plan.theorem, profile: plan.profile, rows: &rows, summary: &summary };
            let mut buf = serde_json::to_vec_pretty(&out)?;
            buf.push(b'\n');
            buf
        }
    };
    write_file(&plan.output, &bytes)?;

    for s in &summary {
        let fmt = |v: Option<f64>| v.map_or("none".to_string(), |v| format!("{v:.6}"));
        println!(
            "n={} rows={} r*={} slope={} expected={}",
            s.n,
            plan.radii.len(),
            fmt(s.r_star),
            fmt(s.fitted_slope),
            fmt(s.expected_slope)
        );
    }
    println!("wrote {}", plan.output.display());
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, r: f64, excess: f64) -> ReportRow {
        ReportRow {
            n,
            r,
            a: 1.0,
            q: 6.0,
            quotient: 1.0 + excess,
            reference: 1.0,
            margin: excess,
            error_estimate: 0.0,
            verdict: Verdict::classify(excess, 1e-15),
        }
    }

    #[test]
    fn slope_fit_recovers_a_linear_correction() {
        let rows: Vec<ReportRow> =
            [1e-3, 2e-3, 4e-3, 8e-3, 0.1].iter().map(|r| row(3, *r, (0.75 - 0.5 * r) * r * r)).collect();
        let refs: Vec<&ReportRow> = rows.iter().collect();
        assert!((fitted_slope(&refs).unwrap() - 0.75).abs() < 1e-9);
    }

    #[test]
    fn threshold_is_the_largest_exceeding_radius() {
        let rows = vec![row(3, 0.1, 1e-3), row(3, 0.3, 2e-3), row(3, 0.6, -1e-3)];
        let s = summarize(Theorem::AnnulusRiesz, &[3], &rows);
        assert_eq!(s[0].r_star, Some(0.3));
        assert_eq!(s[0].expected_slope, Some(0.75));
    }
}
