use serde::Serialize;
use std::f64::consts::PI;

use super::{clustered_breaks, gauss_legendre, QuadratureRule};
use crate::error::{invalid, unsupported, Error, Result};
use crate::geometry::{sphere_area_unchecked, Component};

/// Polar-angle rule on `[0, π]` for a kernel centred on the pole `θ = 0`.
///
/// For a source at distance `s` from the centre of a sphere of radius `rho`,
/// `|x - y|` has a complex zero at `θ ≈ ±i |s - rho| / sqrt(s rho)`. Panels are
/// refined geometrically toward the pole down to that width, so the rule is
/// accurate uniformly as `s → rho`.
pub fn polar_rule(s: f64, rho: f64, order: usize) -> Result<QuadratureRule> {
    let width = if s > 0.0 && rho > 0.0 {
        (s - rho).abs() / (s * rho).sqrt()
    } else {
        f64::INFINITY
    };
    polar_rule_with_width(width, order)
}

/// Polar-angle rule refined toward `θ = 0` down to the given peak width.
pub fn polar_rule_with_width(width: f64, order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(invalid("quadrature order must be at least 1"));
    }
    // sin^{n-2} θ oscillates faster as n grows, so far panels stay below π/4
    let mut breaks = if width.is_finite() {
        clustered_breaks(0.0, PI, width.max(1e-15))
    } else {
        vec![0.0, 0.25 * PI]
    };
    breaks.pop();
    while let Some(&last) = breaks.last() {
        if last >= PI - 1e-12 {
            break;
        }
        breaks.push((last + 0.25 * PI).min(PI));
    }
    *breaks.last_mut().unwrap() = PI;
    QuadratureRule::composite(&breaks, order)
}

/// `∫_{∂B_ρ} G(|x - y|) dS_y` for `|x| = s`, reduced to the polar angle:
///
/// `|S^{n-2}| ρ^{n-1} ∫_0^π G(sqrt(s² + ρ² - 2 s ρ cos θ)) sin^{n-2} θ dθ`.
///
/// `rule` must cover `[0, π]`; see [`polar_rule`]. When `s = ρ` the kernel is
/// evaluated at distance zero and a non-finite value is reported as a
/// singular configuration.
pub fn polar_reduce_sphere_integral<G: Fn(f64) -> f64>(
    n: usize,
    rho: f64,
    s: f64,
    kernel: G,
    rule: &QuadratureRule,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if !(rho > 0.0) || !(s >= 0.0) {
        return Err(invalid(format!("radius {rho} and distance {s} must be positive")));
    }
    let (a, b) = rule.meta().interval;
    if a.abs() > 1e-15 || (b - PI).abs() > 1e-12 {
        return Err(invalid("polar rule must cover [0, pi]"));
    }
    if (s - rho).abs() <= 1e-14 * rho && !kernel(0.0).is_finite() {
        return Err(Error::Singular(format!(
            "source on the sphere (s = {s}, rho = {rho}) with a singular kernel"
        )));
    }
    let gap2 = (s - rho) * (s - rho);
    let sr4 = 4.0 * s * rho;
    let power = n as i32 - 2;
    let sum: f64 = rule
        .iter()
        .map(|(theta, w)| {
            let half = (0.5 * theta).sin();
            let d = (gap2 + sr4 * half * half).sqrt();
            w * kernel(d) * theta.sin().powi(power)
        })
        .sum();
    let ring = if n == 2 { 2.0 } else { sphere_area_unchecked(n - 1, 1.0) };
    Ok(ring * rho.powi(n as i32 - 1) * sum)
}

/// Product rule on a sphere of radius `radius` in `R^3`.
///
/// Gauss–Legendre in `cos θ` times a uniform azimuthal rule with twice as many
/// points; `θ` is measured from the `x_3` axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceGrid {
    radius: f64,
    component: Component,
    polar: Vec<f64>,
    azimuths: usize,
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

pub fn surface_grid(
    n: usize,
    radius: f64,
    component: Component,
    resolution: usize,
) -> Result<SurfaceGrid> {
    if n != 3 {
        return Err(unsupported(format!("surface grids exist only for n = 3, got n = {n}")));
    }
    if resolution < 4 {
        return Err(invalid(format!("surface grid resolution {resolution} below 4")));
    }
    if !(radius > 0.0) {
        return Err(invalid("sphere radius must be positive"));
    }
    let (t, wt) = gauss_legendre(resolution);
    let azimuths = 2 * resolution;
    let dphi = 2.0 * PI / azimuths as f64;
    let mut points = Vec::with_capacity(resolution * azimuths);
    let mut weights = Vec::with_capacity(points.capacity());
    for (ti, wi) in t.iter().zip(&wt) {
        let st = (1.0 - ti * ti).max(0.0).sqrt();
        for k in 0..azimuths {
            let phi = (k as f64 + 0.5) * dphi;
            points.push([radius * st * phi.cos(), radius * st * phi.sin(), radius * ti]);
            weights.push(radius * radius * wi * dphi);
        }
    }
    Ok(SurfaceGrid { radius, component, polar: t, azimuths, points, weights })
}

impl SurfaceGrid {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn resolution(&self) -> usize {
        self.polar.len()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: FnMut(&[f64; 3]) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }

    /// Bilinear interpolation of nodal values in `(cos θ, φ)`.
    pub fn interpolate(&self, values: &[f64], p: &[f64]) -> f64 {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt().max(1e-300);
        let t = (p[2] / r).clamp(-1.0, 1.0);
        let nphi = self.azimuths;
        let dphi = 2.0 * PI / nphi as f64;
        let phi = p[1].atan2(p[0]).rem_euclid(2.0 * PI);
        let u = phi / dphi - 0.5;
        let k0 = u.floor();
        let fu = u - k0;
        let k0 = (k0 as i64).rem_euclid(nphi as i64) as usize;
        let k1 = (k0 + 1) % nphi;
        let ring = |i: usize| {
            values[i * nphi + k0] * (1.0 - fu) + values[i * nphi + k1] * fu
        };
        let m = self.polar.len();
        if t <= self.polar[0] {
            return ring(0);
        }
        if t >= self.polar[m - 1] {
            return ring(m - 1);
        }
        let i = self.polar.partition_point(|&x| x <= t) - 1;
        let ft = (t - self.polar[i]) / (self.polar[i + 1] - self.polar[i]);
        ring(i) * (1.0 - ft) + ring(i + 1) * ft
    }
}

/// Product nodes on the sphere of radius `radius` in `R^3` with the polar
/// angle measured from `axis` (a unit vector).
///
/// Used for integrands concentrated near one direction: `polar` is a rule on
/// `[0, π]` (typically from [`polar_rule`]), the azimuth is uniform.
pub fn focused_sphere_nodes(
    radius: f64,
    axis: [f64; 3],
    polar: &QuadratureRule,
    azimuths: usize,
) -> Vec<([f64; 3], f64)> {
    let (u, v) = orthonormal_frame(axis);
    let dphi = 2.0 * PI / azimuths as f64;
    let trig: Vec<(f64, f64)> = (0..azimuths)
        .map(|k| {
            let phi = (k as f64 + 0.5) * dphi;
            (phi.cos(), phi.sin())
        })
        .collect();
    let mut out = Vec::with_capacity(polar.len() * azimuths);
    for (theta, w) in polar.iter() {
        let (st, ct) = theta.sin_cos();
        let wt = radius * radius * st * w * dphi;
        for &(c, s) in &trig {
            let mut p = [0.0; 3];
            for d in 0..3 {
                p[d] = radius * (ct * axis[d] + st * (c * u[d] + s * v[d]));
            }
            out.push((p, wt));
        }
    }
    out
}

fn orthonormal_frame(a: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = helper[0] * a[0] + helper[1] * a[1] + helper[2] * a[2];
    let mut u = [helper[0] - dot * a[0], helper[1] - dot * a[1], helper[2] - dot * a[2]];
    let nu = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u.iter_mut().for_each(|x| *x /= nu);
    let v = [
        a[1] * u[2] - a[2] * u[1],
        a[2] * u[0] - a[0] * u[2],
        a[0] * u[1] - a[1] * u[0],
    ];
    (u, v)
}
