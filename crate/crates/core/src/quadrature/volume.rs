use serde::Serialize;

use super::{gauss_legendre, surface_grid, QuadratureRule, RuleMeta, TargetMeasure};
use crate::error::{invalid, unsupported, Result};
use crate::geometry::{ball_volume_unchecked, sphere_area_unchecked, Component, DomainSpec};
use crate::zonal::gegenbauer_rule;

/// Volume nodes never sit closer than this to a boundary sphere.
pub const MIN_BOUNDARY_DISTANCE: f64 = 1e-12;

/// Boundary-graded rule for integrals over a domain.
///
/// The radial part is a composite Gauss rule in a graded variable: on a
/// segment `[a, b]` graded toward `b`, `ρ = b - (b - a)(1 - t)^β`. The ball is
/// one segment graded toward `ρ = 1`; the annulus is split at the mid radius
/// with each half graded toward its own boundary sphere. Radial weights include
/// the shell area, so they integrate radial functions directly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeRule {
    domain: DomainSpec,
    radial: QuadratureRule,
    angular_order: usize,
    grading: f64,
}

struct Segment {
    a: f64,
    b: f64,
    toward_end: bool,
}

pub fn graded_volume_rule(
    domain: &DomainSpec,
    grading: f64,
    radial_order: usize,
    angular_order: usize,
) -> Result<VolumeRule> {
    domain.validate()?;
    if !(grading >= 1.0) {
        return Err(invalid(format!("grading exponent {grading} below 1")));
    }
    if radial_order < 2 || angular_order < 2 {
        return Err(invalid("volume rule orders must be at least 2"));
    }
    let segments = match *domain {
        DomainSpec::Ball { .. } => vec![Segment { a: 0.0, b: 1.0, toward_end: true }],
        DomainSpec::Annulus { inner, .. } => {
            let mid = 0.5 * (inner + 1.0);
            vec![
                Segment { a: inner, b: mid, toward_end: false },
                Segment { a: mid, b: 1.0, toward_end: true },
            ]
        }
        DomainSpec::HalfSpaceWindow { radius, .. } => {
            vec![Segment { a: 0.0, b: radius, toward_end: true }]
        }
    };

    let (x, w) = gauss_legendre(radial_order);
    let t_min = 0.5 * (1.0 + x[0]);
    let n = domain.dim();
    let shell_factor = match domain {
        DomainSpec::HalfSpaceWindow { .. } => 0.5,
        _ => 1.0,
    };

    let mut nodes = Vec::with_capacity(radial_order * segments.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    let mut used_grading = grading;
    for seg in &segments {
        let len = seg.b - seg.a;
        // keep the node closest to the boundary at least MIN_BOUNDARY_DISTANCE away
        let cap = (MIN_BOUNDARY_DISTANCE / len).ln() / t_min.ln();
        let beta = grading.min(cap).max(1.0);
        used_grading = used_grading.min(beta);
        for (xi, wi) in x.iter().zip(&w) {
            let t = 0.5 * (1.0 + xi);
            let wt = 0.5 * wi;
            let (rho, jac) = if seg.toward_end {
                let s = 1.0 - t;
                (seg.b - len * s.powf(beta), beta * len * s.powf(beta - 1.0))
            } else {
                (seg.a + len * t.powf(beta), beta * len * t.powf(beta - 1.0))
            };
            nodes.push(rho);
            weights.push(wt * jac * shell_factor * sphere_area_unchecked(n, rho));
        }
    }
    let (lo, hi) = domain.radial_extent();
    let meta = RuleMeta {
        order: radial_order,
        panels: segments.len(),
        grading: used_grading,
        interval: (lo, hi),
        measure: TargetMeasure::Volume(*domain),
    };
    let radial = QuadratureRule::new(nodes, weights, meta)?;
    Ok(VolumeRule { domain: *domain, radial, angular_order, grading: used_grading })
}

impl VolumeRule {
    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Radial nodes with shell-area weights.
    pub fn radial(&self) -> &QuadratureRule {
        &self.radial
    }

    pub fn angular_order(&self) -> usize {
        self.angular_order
    }

    /// Grading exponent actually used (may be capped by the boundary distance floor).
    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn mass(&self) -> f64 {
        self.radial.total_mass()
    }

    /// Radial weights without the unit-sphere area, i.e. for `ρ^{n-1} dρ`.
    pub fn radial_measure_weights(&self) -> Vec<f64> {
        let area = self.domain.dim() as f64 * ball_volume_unchecked(self.domain.dim());
        self.radial.weights().iter().map(|w| w / area).collect()
    }

    /// Same construction with half the radial and angular orders.
    pub fn coarsened(&self) -> Result<VolumeRule> {
        graded_volume_rule(
            &self.domain,
            self.grading,
            (self.radial.meta().order / 2).max(2),
            (self.angular_order / 2).max(2),
        )
    }

    pub fn integrate_radial<F: FnMut(f64) -> f64>(&self, f: F) -> f64 {
        self.radial.integrate(f)
    }

    /// `∫_Ω F(|x|, x_n / |x|) dx` for a field symmetric about the `x_n` axis.
    pub fn integrate_zonal<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> Result<f64> {
        if !self.domain.is_spherical() {
            return Err(unsupported("zonal integration on a half-space window"));
        }
        let angular = gegenbauer_rule(self.domain.dim(), self.angular_order)?;
        let radial = self.radial_measure_weights();
        let mut total = 0.0;
        for (rho, wr) in self.radial.nodes().iter().zip(radial) {
            let shell: f64 = angular.iter().map(|(t, wt)| wt * f(*rho, t)).sum();
            total += wr * shell;
        }
        Ok(total)
    }

    /// `∫_Ω F(x) dx` for an arbitrary field on a three-dimensional ball or annulus.
    pub fn integrate_cartesian3<F: FnMut(&[f64; 3]) -> f64>(&self, mut f: F) -> Result<f64> {
        if self.domain.dim() != 3 || !self.domain.is_spherical() {
            return Err(unsupported("cartesian volume integration needs a 3-D ball or annulus"));
        }
        let grid = surface_grid(3, 1.0, Component::Outer, self.angular_order.max(4))?;
        let radial = self.radial_measure_weights();
        let mut total = 0.0;
        for (rho, wr) in self.radial.nodes().iter().zip(radial) {
            let shell = grid.integrate(|p| f(&[rho * p[0], rho * p[1], rho * p[2]]));
            total += wr * shell;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn masses() {
        let omega3 = 4.0 * PI / 3.0;
        for beta in [1.0, 2.0, 3.0, 5.0] {
            let r = graded_volume_rule(&DomainSpec::ball(3).unwrap(), beta, 64, 8).unwrap();
            assert!((r.mass() / omega3 - 1.0).abs() < 1e-12, "beta {beta}");
        }
        let a = graded_volume_rule(&DomainSpec::annulus(3, 0.1).unwrap(), 3.0, 64, 8).unwrap();
        assert!((a.mass() - omega3 * 0.999).abs() < 1e-12);
        assert!((a.mass() - 4.184_601).abs() < 1e-6);
        let a5 = graded_volume_rule(&DomainSpec::annulus(5, 0.5).unwrap(), 3.0, 64, 8).unwrap();
        let omega5 = 8.0 * PI * PI / 15.0;
        assert!((a5.mass() / (omega5 * (1.0 - 0.5f64.powi(5))) - 1.0).abs() < 1e-12);
        let w = graded_volume_rule(&DomainSpec::half_space_window(3, 2.0).unwrap(), 3.0, 64, 8)
            .unwrap();
        assert!((w.mass() / (0.5 * omega3 * 8.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nodes_stay_off_the_boundary() {
        for order in [16, 64, 128, 256] {
            let d = DomainSpec::annulus(4, 0.2).unwrap();
            let r = graded_volume_rule(&d, 3.0, order, 8).unwrap();
            for &rho in r.radial().nodes() {
                assert!(rho - 0.2 >= MIN_BOUNDARY_DISTANCE * 0.999);
                assert!(1.0 - rho >= MIN_BOUNDARY_DISTANCE * 0.999);
            }
            assert!((r.mass() / d.volume() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn grading_clusters_nodes() {
        let d = DomainSpec::ball(3).unwrap();
        let plain = graded_volume_rule(&d, 1.0, 32, 8).unwrap();
        let graded = graded_volume_rule(&d, 3.0, 32, 8).unwrap();
        let last = |r: &VolumeRule| 1.0 - r.radial().nodes().last().unwrap();
        assert!(last(&graded) < 1e-3 * last(&plain));
        assert!(graded_volume_rule(&d, 0.5, 32, 8).is_err());
    }

    #[test]
    fn zonal_and_cartesian_moments() {
        let d = DomainSpec::annulus(3, 0.3).unwrap();
        let r = graded_volume_rule(&d, 3.0, 32, 16).unwrap();
        // ∫ x_3^2 over the annulus = (4π/15)(1 - r^5)
        let exact = 4.0 * PI / 15.0 * (1.0 - 0.3f64.powi(5));
        let z = r.integrate_zonal(|rho, t| (rho * t).powi(2)).unwrap();
        let c = r.integrate_cartesian3(|x| x[2] * x[2]).unwrap();
        assert!((z / exact - 1.0).abs() < 1e-12);
        assert!((c / exact - 1.0).abs() < 1e-12);
    }
}
