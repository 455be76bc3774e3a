//! Functions on spheres that depend only on the angle to the `x_n` axis.
//!
//! A zonal function on `S^{n-1}` is a function of `t = cos θ`, the last
//! coordinate of the unit vector. With `λ = (n - 2) / 2` the Gegenbauer
//! polynomials `C_l^λ(t)` are its spherical harmonic basis, and the Newton kernel expands as
//!
//! `|x - y|^{2-n} = Σ_l min^l / max^{l+n-2} C_l^λ(x̂·ŷ)`,  `min, max` of `|x|, |y|`.
//!
//! Funk–Hecke then makes the single-layer operator diagonal: integrating
//! `C_l^λ(e·ω)` against the kernel over `S^{n-1}` multiplies it by
//! `n ω_n (n - 2) / (2l + n - 2)`. This turns the extension and restriction
//! operators for zonal data into finite sums that are exact up to rounding.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::geometry::{ball_volume_unchecked, norm, DomainSpec};
use crate::quadrature::{QuadratureRule, RuleMeta, TargetMeasure};

/// Gauss–Gegenbauer rule in `t = cos θ` for zonal integrals over `S^{n-1}`.
///
/// Weights carry the sphere measure, so they sum to `n ω_n`; exact for
/// polynomials in `t` of degree `2 * count - 1`.
pub fn gegenbauer_rule(n: usize, count: usize) -> Result<QuadratureRule> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    if count == 0 {
        return Err(invalid("Gegenbauer rule needs at least one node"));
    }
    let lambda = 0.5 * (n as f64 - 2.0);
    // Golub–Welsch on the symmetric Jacobi matrix of the monic recurrence
    let mut jacobi = DMatrix::<f64>::zeros(count, count);
    for k in 1..count {
        let kf = k as f64;
        let beta = kf * (kf + 2.0 * lambda - 1.0) / (4.0 * (kf + lambda) * (kf + lambda - 1.0));
        jacobi[(k, k - 1)] = beta.sqrt();
        jacobi[(k - 1, k)] = beta.sqrt();
    }
    let eig = SymmetricEigen::new(jacobi);
    let mass = n as f64 * ball_volume_unchecked(n);
    let mut pairs: Vec<(f64, f64)> = (0..count)
        .map(|j| {
            let v0 = eig.eigenvectors[(0, j)];
            (eig.eigenvalues[j], mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // symmetrize: the exact rule is symmetric under t -> -t
    for j in 0..count / 2 {
        let k = count - 1 - j;
        let t = 0.5 * (pairs[k].0 - pairs[j].0);
        let w = 0.5 * (pairs[k].1 + pairs[j].1);
        pairs[j] = (-t, w);
        pairs[k] = (t, w);
    }
    if count % 2 == 1 {
        pairs[count / 2].0 = 0.0;
    }
    let meta = RuleMeta {
        order: count,
        panels: 1,
        grading: 1.0,
        interval: (-1.0, 1.0),
        measure: TargetMeasure::SphereZonal { n },
    };
    QuadratureRule::new(
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1).collect(),
        meta,
    )
}

/// `C_0^λ(t), ..., C_{L-1}^λ(t)` written into `out`.
pub fn gegenbauer_values(lambda: f64, t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = 2.0 * lambda * t;
    }
    for l in 2..out.len() {
        let lf = l as f64;
        out[l] = (2.0 * t * (lf + lambda - 1.0) * out[l - 1] - (lf + 2.0 * lambda - 2.0) * out[l - 2]) / lf;
    }
}

/// Nodal basis for zonal functions of degree below `len()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZonalBasis {
    n: usize,
    lambda: f64,
    rule: QuadratureRule,
    /// `C_l(t_j)`, row `j`.
    table: Vec<f64>,
    /// `Σ_j w_j C_l(t_j)^2`.
    norms: Vec<f64>,
}

impl ZonalBasis {
    pub fn new(n: usize, count: usize) -> Result<Self> {
        let rule = gegenbauer_rule(n, count)?;
        let lambda = 0.5 * (n as f64 - 2.0);
        let mut table = vec![0.0; count * count];
        for (j, t) in rule.nodes().iter().enumerate() {
            gegenbauer_values(lambda, *t, &mut table[j * count..(j + 1) * count]);
        }
        let norms = (0..count)
            .map(|l| {
                rule.weights()
                    .iter()
                    .enumerate()
                    .map(|(j, w)| w * table[j * count + l].powi(2))
                    .sum()
            })
            .collect();
        Ok(Self { n, lambda, rule, table, norms })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    /// Nodes `t_j = cos θ_j`, ascending.
    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    /// Sphere-measure weights of the nodes on the unit sphere.
    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn table_row(&self, j: usize) -> &[f64] {
        let l = self.len();
        &self.table[j * l..(j + 1) * l]
    }

    /// Gegenbauer coefficients of the interpolant of nodal values.
    pub fn coefficients(&self, values: &[f64]) -> Vec<f64> {
        let l = self.len();
        let mut coeffs = vec![0.0; l];
        for (j, (v, w)) in values.iter().zip(self.weights()).enumerate() {
            let row = self.table_row(j);
            for k in 0..l {
                coeffs[k] += w * v * row[k];
            }
        }
        coeffs.iter_mut().zip(&self.norms).for_each(|(c, h)| *c /= h);
        coeffs
    }

    pub fn evaluate(&self, coeffs: &[f64], t: f64) -> f64 {
        let mut c = vec![0.0; coeffs.len()];
        gegenbauer_values(self.lambda, t, &mut c);
        c.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }

    /// Funk–Hecke multiplier of the Newton kernel on degree `l`.
    pub fn single_layer_multiplier(&self, l: usize) -> f64 {
        let n = self.n as f64;
        n * ball_volume_unchecked(self.n) * (n - 2.0) / (2.0 * l as f64 + n - 2.0)
    }
}

/// `min^l / max^{l+n-2}` for the Newton kernel expansion.
pub(crate) fn kernel_radial_factors(n: usize, rho: f64, radius: f64, out: &mut [f64]) {
    let (lo, hi) = if rho < radius { (rho, radius) } else { (radius, rho) };
    let z = lo / hi;
    let mut acc = hi.powi(2 - n as i32);
    for v in out.iter_mut() {
        *v = acc;
        acc *= z;
    }
}

/// Zonal boundary data on a ball or annulus: nodal values per boundary sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZonalProfile {
    domain: DomainSpec,
    #[serde(skip)]
    basis: Arc<ZonalBasis>,
    values: Vec<Vec<f64>>,
}

impl ZonalProfile {
    pub fn new(domain: DomainSpec, basis: Arc<ZonalBasis>, values: Vec<Vec<f64>>) -> Result<Self> {
        if !domain.is_spherical() {
            return Err(invalid("zonal profiles live on ball or annulus boundaries"));
        }
        if basis.dim() != domain.dim() {
            return Err(invalid("basis dimension differs from the domain dimension"));
        }
        let pieces = domain.boundary().len();
        if values.len() != pieces || values.iter().any(|v| v.len() != basis.len()) {
            return Err(invalid(format!(
                "expected {pieces} components of {} nodal values",
                basis.len()
            )));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(invalid("non-finite nodal value"));
        }
        Ok(Self { domain, basis, values })
    }

    /// Constant value on each boundary sphere.
    pub fn constant(domain: DomainSpec, basis: Arc<ZonalBasis>, per_component: &[f64]) -> Result<Self> {
        let values = per_component.iter().map(|c| vec![*c; basis.len()]).collect();
        Self::new(domain, basis, values)
    }

    /// Nodal values drawn uniformly from `[0.5, 1.5)`, reproducible from `seed`.
    pub fn random_positive(domain: DomainSpec, basis: Arc<ZonalBasis>, seed: u64) -> Result<Self> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values = domain
            .boundary()
            .iter()
            .map(|_| (0..basis.len()).map(|_| rng.gen_range(0.5..1.5)).collect())
            .collect();
        Self::new(domain, basis, values)
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn basis(&self) -> &Arc<ZonalBasis> {
        &self.basis
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Vec<f64>> {
        self.values
    }

    pub fn with_values(&self, values: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(self.domain, self.basis.clone(), values)
    }

    pub fn coefficients(&self) -> Vec<Vec<f64>> {
        self.values.iter().map(|v| self.basis.coefficients(v)).collect()
    }

    /// Value at a boundary point (the component is picked by radius).
    pub fn evaluate(&self, y: &[f64]) -> Result<f64> {
        let piece = self
            .domain
            .boundary()
            .iter()
            .position(|p| (norm(y) - p.radius).abs() <= 1e-9 * p.radius)
            .ok_or_else(|| Error::Domain(format!("{y:?} is not on the boundary")))?;
        let rho = norm(y);
        let t = (y[y.len() - 1] / rho).clamp(-1.0, 1.0);
        Ok(self.basis.evaluate(&self.basis.coefficients(&self.values[piece]), t))
    }

    /// Newton-kernel extension `E_2 f(x)`, exact for the interpolating polynomial.
    pub fn extension_at(&self, x: &[f64]) -> f64 {
        let rho = norm(x);
        let t = if rho > 0.0 { (x[x.len() - 1] / rho).clamp(-1.0, 1.0) } else { 1.0 };
        let len = self.basis.len();
        let n = self.domain.dim();
        let mut gv = vec![0.0; len];
        gegenbauer_values(self.basis.lambda(), t, &mut gv);
        let mut k = vec![0.0; len];
        let mut total = 0.0;
        for (piece, vals) in self.domain.boundary().iter().zip(&self.values) {
            let coeffs = self.basis.coefficients(vals);
            kernel_radial_factors(n, rho, piece.radius, &mut k);
            let area = piece.radius.powi(n as i32 - 1);
            total += area
                * (0..len)
                    .map(|l| coeffs[l] * self.basis.single_layer_multiplier(l) * k[l] * gv[l])
                    .sum::<f64>();
        }
        total
    }

    /// Harmonic extension `P_2 f(x)`, solved mode by mode.
    pub fn harmonic_at(&self, x: &[f64]) -> f64 {
        let rho = norm(x);
        let t = if rho > 0.0 { (x[x.len() - 1] / rho).clamp(-1.0, 1.0) } else { 1.0 };
        let len = self.basis.len();
        let n = self.domain.dim() as i32;
        let mut gv = vec![0.0; len];
        gegenbauer_values(self.basis.lambda(), t, &mut gv);
        let coeffs = self.coefficients();
        match self.domain {
            DomainSpec::Ball { .. } => (0..len)
                .map(|l| coeffs[0][l] * rho.powi(l as i32) * gv[l])
                .sum(),
            DomainSpec::Annulus { inner, .. } => (0..len)
                .map(|l| {
                    // u_l = α ρ^l + β (r/ρ)^{l+n-2}
                    let li = l as i32;
                    let (outer, hole) = (coeffs[0][l], coeffs[1][l]);
                    let det = 1.0 - inner.powi(2 * li + n - 2);
                    let alpha = (outer - hole * inner.powi(li + n - 2)) / det;
                    let beta = (hole - outer * inner.powi(li)) / det;
                    (alpha * rho.powi(li) + beta * (inner / rho).powi(li + n - 2)) * gv[l]
                })
                .sum(),
            DomainSpec::HalfSpaceWindow { .. } => f64::NAN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{polar_reduce_sphere_integral, polar_rule};
    use std::f64::consts::PI;

    #[test]
    fn rule_masses_and_exactness() {
        for n in 3..=9 {
            let r = gegenbauer_rule(n, 12).unwrap();
            let area = n as f64 * ball_volume_unchecked(n);
            assert!((r.total_mass() / area - 1.0).abs() < 1e-13, "n = {n}");
            // ∫ t^2 dσ over S^{n-1} = area / n
            let m2 = r.integrate(|t| t * t);
            assert!((m2 / (area / n as f64) - 1.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn legendre_case_matches_gauss_legendre() {
        let r = gegenbauer_rule(3, 10).unwrap();
        let (x, w) = crate::quadrature::gauss_legendre(10);
        for j in 0..10 {
            assert!((r.nodes()[j] - x[j]).abs() < 1e-14);
            assert!((r.weights()[j] - 2.0 * PI * w[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn coefficients_round_trip() {
        let b = ZonalBasis::new(5, 9).unwrap();
        let coeffs: Vec<f64> = (0..9).map(|l| 1.0 / (1.0 + l as f64)).collect();
        let vals: Vec<f64> = b.nodes().iter().map(|t| b.evaluate(&coeffs, *t)).collect();
        let back = b.coefficients(&vals);
        for (a, c) in back.iter().zip(&coeffs) {
            assert!((a - c).abs() < 1e-12);
        }
    }

    #[test]
    fn funk_hecke_multiplier_against_direct_quadrature() {
        // E_2 of C_l(t) on the unit sphere at an interior point on the axis:
        // the multiplier formula against a brute-force polar integral.
        for n in [3usize, 4, 6] {
            let b = ZonalBasis::new(n, 6).unwrap();
            for l in 0..4 {
                let s = 0.45;
                let mut coeffs = vec![0.0; 6];
                coeffs[l] = 1.0;
                let domain = DomainSpec::ball(n).unwrap();
                let vals: Vec<f64> = b.nodes().iter().map(|t| b.evaluate(&coeffs, *t)).collect();
                let p = ZonalProfile::new(domain, Arc::new(b.clone()), vec![vals]).unwrap();
                let mut x = vec![0.0; n];
                x[n - 1] = s;
                let spectral = p.extension_at(&x);
                // on the axis the integrand depends only on the polar angle θ
                let lam = b.lambda();
                let rule = polar_rule(s, 1.0, 24).unwrap();
                let ring = (n - 1) as f64 * ball_volume_unchecked(n - 1);
                let direct: f64 = rule
                    .iter()
                    .map(|(th, w)| {
                        let mut g = vec![0.0; l + 1];
                        gegenbauer_values(lam, th.cos(), &mut g);
                        let d = (s * s + 1.0 - 2.0 * s * th.cos()).sqrt();
                        w * g[l] * d.powi(2 - n as i32) * th.sin().powi(n as i32 - 2)
                    })
                    .sum::<f64>()
                    * ring;
                assert!((spectral - direct).abs() < 1e-11 * direct.abs().max(1.0), "n={n} l={l}");
                if l == 0 {
                    let check =
                        polar_reduce_sphere_integral(n, 1.0, s, |d| d.powi(2 - n as i32), &rule)
                            .unwrap();
                    assert!((spectral - check).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn harmonic_extension_matches_boundary_values() {
        let b = Arc::new(ZonalBasis::new(4, 8).unwrap());
        let d = DomainSpec::annulus(4, 0.3).unwrap();
        let p = ZonalProfile::random_positive(d, b, 3).unwrap();
        for (j, t) in p.basis().nodes().iter().enumerate() {
            let st = (1.0 - t * t).sqrt();
            let outer = [st, 0.0, 0.0, *t];
            let inner = [0.3 * st, 0.0, 0.0, 0.3 * t];
            assert!((p.harmonic_at(&outer) - p.values()[0][j]).abs() < 1e-10);
            assert!((p.harmonic_at(&inner) - p.values()[1][j]).abs() < 1e-10);
        }
    }
}
