//! Rayleigh quotients compared against the ball constants.

use serde::Serialize;

use crate::closed_forms::{
    boundary_exponent, critical_exponent, poisson_boundary_exponent, sharp_constant_ball, theta2_ball,
};
use crate::error::{invalid, unsupported, Error, Result};
use crate::extension::{
    extension_field, harmonic_field, integrate_field_estimated, lp_norm_boundary, lq_norm_interior_with,
    BoundaryFunction, NormValue, VolumeOptions,
};
use crate::geometry::DomainSpec;

/// How a quotient compares with the ball constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ExceedsBall,
    BelowBall,
    WithinTolerance,
}

impl Verdict {
    /// Strict verdicts need the margin to clear three error estimates.
    pub fn classify(margin: f64, error: f64) -> Self {
        if margin > 3.0 * error {
            Verdict::ExceedsBall
        } else if margin < -3.0 * error {
            Verdict::BelowBall
        } else {
            Verdict::WithinTolerance
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ExceedsBall => "ExceedsBall",
            Verdict::BelowBall => "BelowBall",
            Verdict::WithinTolerance => "WithinTolerance",
        }
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ExceedsBall" => Ok(Verdict::ExceedsBall),
            "BelowBall" => Ok(Verdict::BelowBall),
            "WithinTolerance" => Ok(Verdict::WithinTolerance),
            other => Err(invalid(format!("unknown verdict {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientReport {
    pub numerator: NormValue,
    /// e.g. `L^6(Omega)`.
    pub numerator_norm: String,
    pub denominator: NormValue,
    pub denominator_norm: String,
    pub quotient: f64,
    pub reference: f64,
    pub margin: f64,
    /// Combined quadrature error of the quotient.
    pub error_estimate: f64,
    pub verdict: Verdict,
}

impl QuotientReport {
    pub fn new(
        numerator: NormValue,
        numerator_norm: impl Into<String>,
        denominator: NormValue,
        denominator_norm: impl Into<String>,
        reference: f64,
    ) -> Result<Self> {
        if !(denominator.value.abs() > 0.0) {
            return Err(Error::Degenerate("zero denominator norm".into()));
        }
        let quotient = numerator.value / denominator.value;
        let rel = numerator.error / numerator.value.abs().max(f64::MIN_POSITIVE)
            + denominator.error / denominator.value.abs();
        let error_estimate = quotient.abs() * rel;
        let margin = quotient - reference;
        Ok(Self {
            numerator,
            numerator_norm: numerator_norm.into(),
            denominator,
            denominator_norm: denominator_norm.into(),
            quotient,
            reference,
            margin,
            error_estimate,
            verdict: Verdict::classify(margin, error_estimate),
        })
    }
}

fn fmt_exp(p: f64) -> String {
    let r = (p * 1e6).round() / 1e6;
    format!("{r}")
}

fn spherical_only(domain: &DomainSpec) -> Result<()> {
    if domain.is_spherical() {
        Ok(())
    } else {
        Err(unsupported("quotients are defined on the ball and the annulus"))
    }
}

/// `J_2(f) = ‖E_2 f‖_{L^{2n/(n-2)}(Ω)} / ‖f‖_{L^{2(n-1)/n}(∂Ω)}`.
pub fn rayleigh_j2(f: &BoundaryFunction) -> Result<QuotientReport> {
    rayleigh_j2_with(f, &VolumeOptions::default())
}

pub fn rayleigh_j2_with(f: &BoundaryFunction, opts: &VolumeOptions) -> Result<QuotientReport> {
    subcritical_quotient(f, critical_exponent(f.domain().dim()), opts)
}

/// `‖E_2 f‖_{L^q(Ω)} / ‖f‖_{L^{2(n-1)/n}(∂Ω)}`, the subcritical version of `J_2`.
pub fn subcritical_quotient(f: &BoundaryFunction, q: f64, opts: &VolumeOptions) -> Result<QuotientReport> {
    let domain = f.domain();
    spherical_only(domain)?;
    let n = domain.dim();
    let p = boundary_exponent(n);
    let den = lp_norm_boundary(f, p)?;
    if !(den > 0.0) {
        return Err(Error::Degenerate("boundary data is identically zero".into()));
    }
    let num = lq_norm_interior_with(&extension_field(f, 2.0)?, q, opts)?;
    QuotientReport::new(
        num,
        format!("L^{}(Omega)", fmt_exp(q)),
        NormValue::exact(den),
        format!("L^{}(dOmega)", fmt_exp(p)),
        sharp_constant_ball(n)?,
    )
}

/// `C_2(Ω) = |Ω|^{-(n+2)/(2n)} |∂Ω|^{-n/(2(n-1))} ∫_Ω ∫_{∂Ω} |x - y|^{2-n} dS_y dx`.
pub fn c2_functional(domain: &DomainSpec) -> Result<QuotientReport> {
    c2_functional_with(domain, &VolumeOptions::default())
}

pub fn c2_functional_with(domain: &DomainSpec, opts: &VolumeOptions) -> Result<QuotientReport> {
    spherical_only(domain)?;
    let n = domain.dim();
    let nf = n as f64;
    let ones = vec![1.0; domain.boundary().len()];
    let f = BoundaryFunction::constant(*domain, &ones)?;
    let num = integrate_field_estimated(&extension_field(&f, 2.0)?, opts, |v| v)?;
    let den = domain.volume().powf((nf + 2.0) / (2.0 * nf)) * domain.boundary_area().powf(nf / (2.0 * (nf - 1.0)));
    QuotientReport::new(
        num,
        "double layer integral",
        NormValue::exact(den),
        "|Omega|^{(n+2)/2n} |dOmega|^{n/2(n-1)}",
        sharp_constant_ball(n)?,
    )
}

/// The full harmonic-extension quotient and its duality surrogate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonReport {
    /// `‖P_2 f‖_{L^{2n/(n-2)}} / ‖f‖_{L^{2(n-1)/(n-2)}}`.
    pub full: QuotientReport,
    /// `∫ P_2 f / (|Ω|^{(n+2)/(2n)} ‖f‖_{L^{2(n-1)/(n-2)}})`, never above `full`.
    pub surrogate: QuotientReport,
}

pub fn poisson_quotient(f: &BoundaryFunction) -> Result<PoissonReport> {
    poisson_quotient_with(f, &VolumeOptions::default())
}

pub fn poisson_quotient_with(f: &BoundaryFunction, opts: &VolumeOptions) -> Result<PoissonReport> {
    let domain = f.domain();
    spherical_only(domain)?;
    let n = domain.dim();
    let nf = n as f64;
    let p = poisson_boundary_exponent(n);
    let q = critical_exponent(n);
    let den = lp_norm_boundary(f, p)?;
    if !(den > 0.0) {
        return Err(Error::Degenerate("boundary data is identically zero".into()));
    }
    let field = harmonic_field(f)?;
    let reference = theta2_ball(n)?;
    let bnorm = format!("L^{}(dOmega)", fmt_exp(p));
    let full = QuotientReport::new(
        lq_norm_interior_with(&field, q, opts)?,
        format!("L^{}(Omega)", fmt_exp(q)),
        NormValue::exact(den),
        bnorm.clone(),
        reference,
    )?;
    let vol = domain.volume().powf((nf + 2.0) / (2.0 * nf));
    let surrogate = QuotientReport::new(
        integrate_field_estimated(&field, opts, |v| v)?,
        "L^1(Omega)",
        NormValue::exact(vol * den),
        format!("|Omega|^{{(n+2)/2n}} {bnorm}"),
        reference,
    )?;
    Ok(PoissonReport { full, surrogate })
}

/// Isoperimetric constant of the scalar-flat metric `(P_2 f)^{4/(n-2)} g_0`,
/// i.e. the full Poisson quotient to the power `2/(n-2)`.
pub fn isoperimetric_conformal(f: &BoundaryFunction) -> Result<f64> {
    let values = f.sample_values()?;
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(invalid("conformal factor data must be positive"));
    }
    let n = f.domain().dim() as f64;
    Ok(poisson_quotient(f)?.full.quotient.powf(2.0 / (n - 2.0)))
}

/// Which quotient of two-level annulus data to maximize over `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwoLevelObjective {
    /// `J_2` of the data `(1, a)`.
    Riesz,
    /// Duality surrogate of the Poisson quotient.
    PoissonSurrogate,
    /// Full Poisson quotient.
    PoissonFull,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoLevelOptimum {
    pub a: f64,
    pub report: QuotientReport,
    /// Every `(a, quotient)` evaluated on the log grid.
    pub grid: Vec<(f64, f64)>,
}

fn two_level_report(
    domain: &DomainSpec,
    a: f64,
    objective: TwoLevelObjective,
    opts: &VolumeOptions,
) -> Result<QuotientReport> {
    let f = BoundaryFunction::two_level(*domain, a)?;
    match objective {
        TwoLevelObjective::Riesz => rayleigh_j2_with(&f, opts),
        TwoLevelObjective::PoissonSurrogate => Ok(poisson_quotient_with(&f, opts)?.surrogate),
        TwoLevelObjective::PoissonFull => Ok(poisson_quotient_with(&f, opts)?.full),
    }
}

/// Maximizes over `a` on a log grid of `points` values in `[lo, hi]`, then
/// refines by golden-section search between the neighbours of the best point.
pub fn optimize_two_level(
    domain: &DomainSpec,
    objective: TwoLevelObjective,
    (lo, hi): (f64, f64),
    points: usize,
    opts: &VolumeOptions,
) -> Result<TwoLevelOptimum> {
    if !matches!(domain, DomainSpec::Annulus { .. }) {
        return Err(invalid("two-level data needs an annulus"));
    }
    if !(lo > 0.0 && hi > lo) || points < 3 {
        return Err(invalid("a-grid needs 0 < lo < hi and at least 3 points"));
    }
    let value = |ln_a: f64| two_level_report(domain, ln_a.exp(), objective, opts).map(|r| r.quotient);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (points - 1) as f64;
    let mut grid = Vec::with_capacity(points);
    for k in 0..points {
        let la = llo + step * k as f64;
        grid.push((la.exp(), value(la)?));
    }
    let best = grid
        .iter()
        .enumerate()
        .fold(0, |b, (k, (_, v))| if *v > grid[b].1 { k } else { b });
    let (mut a, mut b) = (
        llo + step * best.saturating_sub(1) as f64,
        llo + step * (best + 1).min(points - 1) as f64,
    );
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (value(c)?, value(d)?);
    while b - a > 1e-7 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = value(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = value(d)?;
        }
    }
    let mut a_best = (0.5 * (a + b)).exp();
    // keep the grid point if refinement did not improve on it
    if value(a_best.ln())? < grid[best].1 {
        a_best = grid[best].0;
    }
    Ok(TwoLevelOptimum { a: a_best, report: two_level_report(domain, a_best, objective, opts)?, grid })
}
