//! One-dimensional rules and everything built from them.
//!
//! All integrals in the crate are tensor or composite Gauss–Legendre rules:
//! plain rules on intervals, geometrically graded composite rules for nearly
//! singular kernels, the polar reduction of sphere integrals, product rules on
//! `S^2`, and boundary-graded radial rules for volume integrals.

mod sphere;
mod volume;

pub use sphere::{
    focused_sphere_nodes, polar_reduce_sphere_integral, polar_rule, polar_rule_with_width,
    surface_grid, SurfaceGrid,
};
pub use volume::{graded_volume_rule, VolumeRule, MIN_BOUNDARY_DISTANCE};

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::geometry::DomainSpec;

/// What a rule's weights integrate against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TargetMeasure {
    /// `dx` on the interval.
    Lebesgue,
    /// Zonal functions on `S^{n-1}`: `∫ F(t) dσ` with `t = cos θ`.
    SphereZonal { n: usize },
    /// Radial functions on a domain: weights carry the shell area.
    Volume(DomainSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleMeta {
    /// Gauss order per panel.
    pub order: usize,
    pub panels: usize,
    /// Polynomial grading exponent (1 means ungraded).
    pub grading: f64,
    pub interval: (f64, f64),
    pub measure: TargetMeasure,
}

/// Nodes and positive weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    meta: RuleMeta,
}

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, meta: RuleMeta) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(invalid("node and weight counts differ"));
        }
        if nodes.is_empty() {
            return Err(invalid("empty quadrature rule"));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(invalid(format!("non-positive quadrature weight {w}")));
        }
        Ok(Self { nodes, weights, meta })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn meta(&self) -> &RuleMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Integral of the constant 1.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Composite rule: `order` Gauss points on every panel `[breaks[i], breaks[i+1]]`.
    pub fn composite(breaks: &[f64], order: usize) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(invalid("composite rule needs at least one panel"));
        }
        if order == 0 {
            return Err(invalid("quadrature order must be at least 1"));
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("panel breaks must be strictly increasing"));
        }
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(order * (breaks.len() - 1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for panel in breaks.windows(2) {
            let half = 0.5 * (panel[1] - panel[0]);
            let mid = 0.5 * (panel[1] + panel[0]);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        let meta = RuleMeta {
            order,
            panels: breaks.len() - 1,
            grading: 1.0,
            interval: (breaks[0], breaks[breaks.len() - 1]),
            measure: TargetMeasure::Lebesgue,
        };
        Self::new(nodes, weights, meta)
    }

    /// Composite rule on `[a, b]` whose panels shrink geometrically (factor 4)
    /// toward `a` until they are narrower than `width / 2`.
    ///
    /// Suited to integrands analytic on `[a, b]` with a complex singularity at
    /// distance about `width` from `a`.
    pub fn clustered_at_start(a: f64, b: f64, width: f64, order: usize) -> Result<Self> {
        Self::composite(&clustered_breaks(a, b, width), order)
    }

    /// Rule for `[0, ∞)`: dyadic panels from `2^-40` to `2^40` plus the mapped
    /// tail `t = 2^40 / u`. Resolves integrands living on any scale in between.
    pub fn half_line(order: usize) -> Result<Self> {
        let span = 40;
        let mut breaks = vec![0.0];
        breaks.extend((-span..=span).map(|k| 2f64.powi(k)));
        let mut rule = Self::composite(&breaks, order)?;
        let top = 2f64.powi(span);
        let tail = Self::composite(&[0.0, 1.0], order)?;
        for (u, w) in tail.iter() {
            rule.nodes.push(top / u);
            rule.weights.push(w * top / (u * u));
        }
        rule.meta.panels += 1;
        rule.meta.interval = (0.0, f64::INFINITY);
        Ok(rule)
    }

    /// Rule for `[start, ∞)` through `t = start / u`, `u ∈ (0, 1]`, with
    /// panels clustered at `u = 0`. Integrands decaying like a power of `t`
    /// become smooth in `u`.
    pub fn tail(start: f64, order: usize) -> Result<Self> {
        if !(start > 0.0) {
            return Err(invalid("tail rule needs a positive start"));
        }
        let base = Self::clustered_at_start(0.0, 1.0, 1e-3, order)?;
        let mut nodes = Vec::with_capacity(base.len());
        let mut weights = Vec::with_capacity(base.len());
        for (u, w) in base.iter() {
            nodes.push(start / u);
            weights.push(w * start / (u * u));
        }
        let meta = RuleMeta { interval: (start, f64::INFINITY), ..base.meta.clone() };
        Self::new(nodes, weights, meta)
    }
}

pub(crate) fn clustered_breaks(a: f64, b: f64, width: f64) -> Vec<f64> {
    let len = b - a;
    let width = width.max(1e-15 * len.abs().max(1e-300));
    let mut inner = Vec::new();
    let mut h = 0.25 * len;
    while h > 0.5 * width && inner.len() < 200 {
        inner.push(a + h);
        h *= 0.25;
    }
    let mut breaks = vec![a];
    breaks.extend(inner.into_iter().rev());
    breaks.push(b);
    breaks
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let m = order;
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(m, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(m, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    (x, w)
}

fn legendre_and_derivative(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule with `order` points mapped to `[a, b]`.
///
/// Exact for polynomials of degree `2 * order - 1`.
pub fn gauss_rule_1d(order: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(invalid("quadrature order must be at least 1"));
    }
    if !(a < b) {
        return Err(invalid(format!("interval [{a}, {b}] is empty")));
    }
    QuadratureRule::composite(&[a, b], order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_rule() {
        let r = gauss_rule_1d(1, -1.0, 1.0).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_exactness() {
        let r = gauss_rule_1d(2, 0.0, 1.0).unwrap();
        assert!((r.integrate(|x| x * x * x) - 0.25).abs() < 1e-16);
    }

    #[test]
    fn sine_cubed() {
        let r = gauss_rule_1d(20, 0.0, PI).unwrap();
        let v = r.integrate(|t| t.sin().powi(3));
        assert!((v - 4.0 / 3.0).abs() < 1e-14, "{}", v - 4.0 / 3.0);
    }

    #[test]
    fn mass_of_every_order() {
        for order in 1..=200 {
            let r = gauss_rule_1d(order, -2.0, 3.0).unwrap();
            assert!((r.total_mass() - 5.0).abs() / 5.0 < 1e-12, "order {order}");
            assert!(r.weights().iter().all(|w| *w > 0.0));
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn high_degree_exactness() {
        for order in [5usize, 17, 64, 128] {
            let r = gauss_rule_1d(order, -1.0, 1.0).unwrap();
            let deg = 2 * order - 2;
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((r.integrate(|x| x.powi(deg as i32)) - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gauss_rule_1d(0, 0.0, 1.0).is_err());
        assert!(gauss_rule_1d(3, 1.0, 1.0).is_err());
        assert!(QuadratureRule::composite(&[0.0, 1.0, 0.5], 3).is_err());
    }

    #[test]
    fn half_line_scale_free() {
        let r = QuadratureRule::half_line(16).unwrap();
        for scale in [1e-4, 1.0, 1e5] {
            let v = r.integrate(|t| scale / (scale * scale + t * t));
            assert!((v - PI / 2.0).abs() < 1e-12, "{scale}: {}", v - PI / 2.0);
        }
    }

    #[test]
    fn tail_rule_power_decay() {
        let r = QuadratureRule::tail(100.0, 16).unwrap();
        let v = r.integrate(|t| t.powi(-3));
        assert!((v / (0.5e-4) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn clustered_rule_resolves_near_singularity() {
        let d = 1e-6;
        let r = QuadratureRule::clustered_at_start(0.0, 1.0, d, 20).unwrap();
        let v = r.integrate(|x| 1.0 / (x * x + d * d));
        let exact = (1.0 / d).atan() / d;
        assert!((v / exact - 1.0).abs() < 1e-13);
    }
}
