//! Exact formulas used as ground truth by the numerical modules.
//!
//! Powers of `ω_n` and `n ω_n` are taken in the log domain; exponents such as
//! `n / (2(n - 1))` applied to `n ω_n` are then accurate to a few ulps.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{ball_volume_unchecked, norm, sphere_area_unchecked, MAX_DIMENSION};
use crate::quadrature::QuadratureRule;

fn check_dim(n: usize) -> Result<()> {
    if (3..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(n))
    }
}

fn ln_omega(n: usize) -> f64 {
    ball_volume_unchecked(n).ln()
}

/// Boundary exponent `2(n-1)/n` of the extension quotient.
pub fn boundary_exponent(n: usize) -> f64 {
    2.0 * (n as f64 - 1.0) / n as f64
}

/// Critical interior exponent `2* = 2n/(n-2)`.
pub fn critical_exponent(n: usize) -> f64 {
    2.0 * n as f64 / (n as f64 - 2.0)
}

/// Boundary exponent `2(n-1)/(n-2)` of the harmonic-extension quotient.
pub fn poisson_boundary_exponent(n: usize) -> f64 {
    2.0 * (n as f64 - 1.0) / (n as f64 - 2.0)
}

/// `∫_{∂B_1} |x - y|^{2-n} dS_y = n ω_n` for `|x| < 1`.
pub fn single_layer_ball(x: &[f64]) -> Result<f64> {
    let n = x.len();
    check_dim(n)?;
    if !(norm(x) < 1.0) {
        return Err(Error::Domain(format!("{x:?} is not inside the unit ball")));
    }
    Ok(sphere_area_unchecked(n, 1.0))
}

/// `∫_{∂B_r} |x - y|^{2-n} dS_y = n ω_n r^{n-1} / |x|^{n-2}` for `|x| > r`.
pub fn single_layer_sphere_exterior(x: &[f64], r: f64) -> Result<f64> {
    let n = x.len();
    check_dim(n)?;
    if !(r > 0.0) {
        return Err(invalid(format!("sphere radius {r} must be positive")));
    }
    let s = norm(x);
    if !(s > r) {
        return Err(Error::Domain(format!("|x| = {s} is not outside the sphere of radius {r}")));
    }
    Ok(sphere_area_unchecked(n, r) / s.powi(n as i32 - 2))
}

/// Sharp extension constant of the unit ball,
/// `n^{(n-2)/(2(n-1))} ω_n^{1 - 1/n - 1/(2(n-1))}`.
pub fn sharp_constant_ball(n: usize) -> Result<f64> {
    check_dim(n)?;
    let nf = n as f64;
    let e_n = (nf - 2.0) / (2.0 * (nf - 1.0));
    let e_w = 1.0 - 1.0 / nf - 1.0 / (2.0 * (nf - 1.0));
    Ok((e_n * nf.ln() + e_w * ln_omega(n)).exp())
}

/// `n^{-1/(n-1)} ω_n^{-1/(n(n-1))}`, the isoperimetric constant of the flat ball.
pub fn isoperimetric_ball(n: usize) -> Result<f64> {
    check_dim(n)?;
    let nf = n as f64;
    Ok((-nf.ln() / (nf - 1.0) - ln_omega(n) / (nf * (nf - 1.0))).exp())
}

/// Harmonic-extension constant of the ball, `ω_n^{(n-2)/(2n)} / (n ω_n)^{(n-2)/(2(n-1))}`.
pub fn theta2_ball(n: usize) -> Result<f64> {
    check_dim(n)?;
    let nf = n as f64;
    let lw = ln_omega(n);
    Ok(((nf - 2.0) / (2.0 * nf) * lw - (nf - 2.0) / (2.0 * (nf - 1.0)) * (nf.ln() + lw)).exp())
}

/// The three ball constants for one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpConstants {
    pub n: usize,
    pub e2_ball: f64,
    pub theta2_ball: f64,
    pub isoperimetric_ball: f64,
}

impl SharpConstants {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            e2_ball: sharp_constant_ball(n)?,
            theta2_ball: theta2_ball(n)?,
            isoperimetric_ball: isoperimetric_ball(n)?,
        })
    }
}

/// Scale and dimension of the half-space bubble pair `(f_ε, g_ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BubbleParams {
    pub eps: f64,
    pub n: usize,
}

impl BubbleParams {
    pub fn new(eps: f64, n: usize) -> Result<Self> {
        check_dim(n)?;
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(invalid(format!("bubble scale {eps} must be positive")));
        }
        Ok(Self { eps, n })
    }

    /// `f_ε` as a function of `|y|` on the boundary hyperplane.
    pub fn f_radial(&self, t: f64) -> f64 {
        (self.eps / (self.eps * self.eps + t * t)).powf(0.5 * self.n as f64)
    }
}

/// `f_ε(y) = (ε / (ε² + |y|²))^{n/2}` for `y ∈ R^{n-1}`.
pub fn bubble_f(p: &BubbleParams, y: &[f64]) -> Result<f64> {
    if y.len() + 1 != p.n {
        return Err(invalid(format!("boundary point must have {} coordinates", p.n - 1)));
    }
    Ok(p.f_radial(norm(y)))
}

/// `g_ε(x) = (ε / ((x_n + ε)² + |x'|²))^{(n+2)/2}` for `x_n ≥ 0`.
pub fn bubble_g(p: &BubbleParams, x: &[f64]) -> Result<f64> {
    if x.len() != p.n {
        return Err(invalid(format!("point must have {} coordinates", p.n)));
    }
    let xn = x[p.n - 1];
    if !(xn >= 0.0) {
        return Err(Error::Domain(format!("x_n = {xn} is below the boundary hyperplane")));
    }
    let tan2 = norm(&x[..p.n - 1]).powi(2);
    let d2 = (xn + p.eps).powi(2) + tan2;
    Ok((p.eps / d2).powf(0.5 * (p.n as f64 + 2.0)))
}

/// `∫_{R^{n-1}} f_ε^s dy` by the radial reduction on the half line.
pub fn bubble_boundary_integral(p: &BubbleParams, s: f64) -> Result<f64> {
    let rule = QuadratureRule::half_line(20)?;
    let ring = sphere_area_unchecked(p.n - 1, 1.0);
    Ok(ring * rule.integrate(|t| p.f_radial(t).powf(s) * t.powi(p.n as i32 - 2)))
}

/// `‖f_ε‖_{L^{2(n-1)/n}(R^{n-1})}`; independent of `ε`.
pub fn bubble_boundary_norm(p: &BubbleParams) -> Result<f64> {
    let s = boundary_exponent(p.n);
    Ok(bubble_boundary_integral(p, s)?.powf(1.0 / s))
}

/// `∫_{|y| > R} f_ε^{2(n-1)/n} dy`, decaying like `(ε/R)^{n-1}`.
pub fn bubble_boundary_tail(p: &BubbleParams, radius: f64) -> Result<f64> {
    let rule = QuadratureRule::tail(radius, 20)?;
    let s = boundary_exponent(p.n);
    let ring = sphere_area_unchecked(p.n - 1, 1.0);
    Ok(ring * rule.integrate(|t| p.f_radial(t).powf(s) * t.powi(p.n as i32 - 2)))
}

/// `‖g_ε‖_{L^{2n/(n+2)}(R^n_+)}`; independent of `ε`.
pub fn bubble_interior_norm(p: &BubbleParams) -> Result<f64> {
    let rule = QuadratureRule::half_line(12)?;
    let nf = p.n as f64;
    let s = 2.0 * nf / (nf + 2.0);
    let ring = sphere_area_unchecked(p.n - 1, 1.0);
    let total = rule.integrate(|xn| {
        let c2 = (xn + p.eps).powi(2);
        rule.integrate(|t| (p.eps / (c2 + t * t)).powf(0.5 * (nf + 2.0) * s) * t.powi(p.n as i32 - 2))
    });
    Ok((ring * total).powf(1.0 / s))
}

/// `u = c1 |x|^{2-n} + c2`, harmonic on the annulus with `u = 1` on the
/// outer sphere and `u = a` on the inner one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusHarmonicCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub r: f64,
    pub a: f64,
    pub n: usize,
}

impl AnnulusHarmonicCoeffs {
    pub fn value_at_radius(&self, rho: f64) -> f64 {
        self.c1 * rho.powi(2 - self.n as i32) + self.c2
    }

    /// `∫_{A_r} u dx = ω_n (n/2 c1 (1 - r²) + c2 (1 - r^n))`.
    pub fn volume_integral(&self) -> f64 {
        let n = self.n as i32;
        ball_volume_unchecked(self.n)
            * (0.5 * self.n as f64 * self.c1 * (1.0 - self.r * self.r) + self.c2 * (1.0 - self.r.powi(n)))
    }
}

pub fn annulus_harmonic_coeffs(r: f64, a: f64, n: usize) -> Result<AnnulusHarmonicCoeffs> {
    check_dim(n)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!("inner radius {r} must lie in (0, 1)")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("inner boundary value {a} must be positive")));
    }
    let rn2 = r.powi(n as i32 - 2);
    let det = 1.0 - rn2;
    Ok(AnnulusHarmonicCoeffs { c1: rn2 * (a - 1.0) / det, c2: (1.0 - a * rn2) / det, r, a, n })
}

/// Exact `C_2(A_r)`; `r = 0` gives the ball value, which equals the sharp constant.
pub fn annulus_c2_exact(r: f64, n: usize) -> Result<f64> {
    check_dim(n)?;
    if !(0.0..1.0).contains(&r) {
        return Err(invalid(format!("inner radius {r} must lie in [0, 1)")));
    }
    let nf = n as f64;
    let w = ball_volume_unchecked(n);
    let ni = n as i32;
    let vol = w * (1.0 - r.powi(ni));
    let area = nf * w * (1.0 + r.powi(ni - 1));
    let num = nf * w * (vol + 0.5 * nf * w * r.powi(ni - 1) * (1.0 - r * r));
    let ln_den = (nf + 2.0) / (2.0 * nf) * vol.ln() + nf / (2.0 * (nf - 1.0)) * area.ln();
    Ok((num.ln() - ln_den).exp())
}

/// Leading coefficient `n/2 - n/(2(n-1))` of `C_2(A_r)/C_2(B_1) - 1` in `r^{n-1}`.
pub fn annulus_c2_slope(n: usize) -> f64 {
    let nf = n as f64;
    0.5 * nf - nf / (2.0 * (nf - 1.0))
}

/// Exact duality surrogate `∫ P_2 f / (|A_r|^{(n+2)/(2n)} ‖f‖_{2(n-1)/(n-2)})`
/// for data `1` on the outer and `a` on the inner sphere.
pub fn annulus_poisson_surrogate_exact(r: f64, a: f64, n: usize) -> Result<f64> {
    let coeffs = annulus_harmonic_coeffs(r, a, n)?;
    let nf = n as f64;
    let w = ball_volume_unchecked(n);
    let p = poisson_boundary_exponent(n);
    let bnorm = (nf * w * (1.0 + a.powf(p) * r.powi(n as i32 - 1))).powf(1.0 / p);
    let vol = w * (1.0 - r.powi(n as i32));
    Ok(coeffs.volume_integral() / (vol.powf((nf + 2.0) / (2.0 * nf)) * bnorm))
}
