use std::f64::consts::PI;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use hlsext_core::closed_forms::{
    bubble_boundary_norm, bubble_boundary_tail, bubble_g, sharp_constant_ball, BubbleParams,
};
use hlsext_core::extension::{integrate_field_estimated, FieldSymmetry, Provenance};
use hlsext_core::geometry::unit_ball_volume;
use hlsext_core::{
    c2_functional, extend_riesz, extension_field, rayleigh_j2, restrict_riesz, BoundaryFunction, DomainSpec,
    InteriorField, VolumeOptions,
};

use crate::config::{parse_n_list, ConfigFile};
use crate::{CliError, EXIT_CHECK_FAILED, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    SingleLayer,
    SharpConstants,
    Bubble,
    Duality,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: Suite,
    /// Dimensions: `3`, `3,5` or `3..8`.
    #[arg(long)]
    pub n: Option<String>,
    /// Bubble scale.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Truncation radius of the boundary hyperplane.
    #[arg(long)]
    pub trunc: Option<f64>,
}

struct Check {
    name: String,
    n: usize,
    value: f64,
    reference: f64,
    tol: f64,
}

impl Check {
    fn new(name: impl Into<String>, n: usize, value: f64, reference: f64, tol: f64) -> Self {
        Self { name: name.into(), n, value, reference, tol }
    }

    fn rel_err(&self) -> f64 {
        (self.value / self.reference - 1.0).abs()
    }

    fn passed(&self) -> bool {
        self.rel_err() <= self.tol
    }
}

pub fn run(args: &VerifyArgs, config: &ConfigFile) -> Result<i32, CliError> {
    let default_n = match args.suite {
        Suite::SingleLayer | Suite::SharpConstants => "3..8",
        Suite::Bubble => "3",
        Suite::Duality => "3..6",
    };
    let ns = parse_n_list(&config.pick(args.n.clone(), "n", default_n.to_string())?)?;
    let checks = match args.suite {
        Suite::SingleLayer => single_layer(&ns)?,
        Suite::SharpConstants => sharp_constants(&ns)?,
        Suite::Bubble => {
            let eps = config.pick(args.eps, "eps", 1.0)?;
            let trunc = config.pick(args.trunc, "trunc", 1e4)?;
            bubble(&ns, eps, trunc)?
        }
        Suite::Duality => duality(&ns)?,
    };
    println!(
        "{:<40} {:>2} {:>22} {:>22} {:>9} {:>7}  status",
        "check", "n", "value", "reference", "rel err", "tol"
    );
    let mut failed = 0;
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!c.passed());
        println!(
            "{:<40} {:>2} {:>22.15e} {:>22.15e} {:>9.2e} {:>7.0e}  {status}",
            c.name,
            c.n,
            c.value,
            c.reference,
            c.rel_err(),
            c.tol
        );
    }
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn point(n: usize, radius: f64) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|k| 1.0 + 0.37 * k as f64).collect();
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x * radius / s).collect()
}

fn single_layer(ns: &[usize]) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for &n in ns {
        let area = n as f64 * unit_ball_volume(n)?;
        let ball = BoundaryFunction::constant(DomainSpec::ball(n)?, &[1.0])?;
        for s in [0.0, 0.25, 0.5, 0.75, 0.95] {
            let v = extend_riesz(&ball, 2.0, &point(n, s))?;
            out.push(Check::new(format!("ball layer |x|={s}"), n, v, area, 1e-10));
        }
        for r in [0.1, 0.2, 0.5] {
            let inner = BoundaryFunction::constant(DomainSpec::annulus(n, r)?, &[0.0, 1.0])?;
            for s in [0.6, 0.8, 0.95] {
                let v = extend_riesz(&inner, 2.0, &point(n, s))?;
                let want = area * r.powi(n as i32 - 1) / s.powi(n as i32 - 2);
                out.push(Check::new(format!("exterior layer r={r} |x|={s}"), n, v, want, 1e-10));
            }
        }
    }
    Ok(out)
}

fn sharp_constants(ns: &[usize]) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for &n in ns {
        let want = sharp_constant_ball(n)?;
        let f = BoundaryFunction::constant(DomainSpec::ball(n)?, &[1.0])?;
        out.push(Check::new("J2(1) on the ball", n, rayleigh_j2(&f)?.quotient, want, 1e-8));
        out.push(Check::new("C2 of the ball", n, c2_functional(&DomainSpec::ball(n)?)?.quotient, want, 1e-8));
    }
    Ok(out)
}

fn bubble(ns: &[usize], eps: f64, trunc: f64) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for &n in ns {
        let p = BubbleParams::new(eps, n)?;
        let f = BoundaryFunction::radial(DomainSpec::half_space_window(n, trunc)?, move |t, _| p.f_radial(t))?;
        let power = (n as f64 - 2.0) / (n as f64 + 2.0);
        let mut ratios = Vec::new();
        for k in 0..20 {
            let s = eps * (0.2 + 4.8 * k as f64 / 19.0);
            let theta = 0.05 + 1.45 * (k as f64 * 0.618_033_988_75).fract();
            let mut x = point(n - 1, s * theta.sin());
            x.push(s * theta.cos());
            ratios.push(extend_riesz(&f, 2.0, &x)? / bubble_g(&p, &x)?.powf(power));
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        for (k, r) in ratios.iter().enumerate() {
            out.push(Check::new(format!("E2 f / g^{power:.3} at point {k}"), n, *r, mean, 1e-4));
        }
        if n == 3 {
            for xn in [0.05, 0.3, 1.0, 2.5, 5.0] {
                let v = extend_riesz(&f, 2.0, &[0.0, 0.0, eps * xn])?;
                // scaling: E2 f_ε(ε x) = ε^{-1/2} E2 f_1(x) at n = 3
                let scaled = v * eps.sqrt() * (1.0 + xn);
                out.push(Check::new(format!("axis (1+x_n) E2 f, x_n={xn}"), n, scaled, 2.0 * PI, 1e-4));
            }
        }
        let norm = bubble_boundary_norm(&p)?;
        for e in [0.1, 10.0] {
            let other = bubble_boundary_norm(&BubbleParams::new(e, n)?)?;
            out.push(Check::new(format!("boundary norm eps={e}"), n, other, norm, 1e-10));
        }
        let pts: Vec<(f64, f64)> = [1e2f64, 1e3, 1e4]
            .iter()
            .map(|r| Ok((r.ln(), bubble_boundary_tail(&p, *r)?.ln())))
            .collect::<hlsext_core::Result<_>>()?;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        out.push(Check::new("tail log-log slope", n, slope, -(n as f64 - 1.0), 0.02));
    }
    Ok(out)
}

type Radial = fn(f64) -> f64;

const RADIAL_TESTS: [(&str, Radial); 5] = [
    ("exp(-rho)", |r| (-r).exp()),
    ("1+rho^2", |r| 1.0 + r * r),
    ("rho", |r| r),
    ("cos(2 rho)", |r| (2.0 * r).cos()),
    ("1/(1+rho)", |r| 1.0 / (1.0 + r)),
];

fn duality(ns: &[usize]) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for &n in ns {
        let ball = DomainSpec::ball(n)?;
        let area = n as f64 * unit_ball_volume(n)?;
        let f = BoundaryFunction::constant(ball, &[1.0])?;
        let ext = extension_field(&f, 2.0)?;
        let mut pole = vec![0.0; n];
        pole[n - 1] = 1.0;
        for (name, g) in RADIAL_TESTS {
            let field = InteriorField::radial(ball, g);
            let (e, gc) = (ext.clone(), field.clone());
            let prod = InteriorField::new(
                ball,
                FieldSymmetry::Radial,
                Provenance::Supplied,
                Arc::new(move |x| Ok(e.eval(x)? * gc.eval(x)?)),
            );
            let lhs = integrate_field_estimated(&prod, &VolumeOptions::default(), |v| v)?.value;
            let rhs = area * restrict_riesz(&field, 2.0, &pole)?;
            out.push(Check::new(format!("<E2 1, {name}> = <1, R2 {name}>"), n, lhs, rhs, 1e-8));
        }
    }
    Ok(out)
}
