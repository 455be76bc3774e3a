//! Boundary-to-interior operators and the norms the quotients need.
//!
//! `E_α f(x) = ∫_{∂Ω} f(y) |x - y|^{α-n} dS_y` (Riesz extension),
//! `R_α g(y) = ∫_Ω g(x) |x - y|^{α-n} dx` (restriction, its adjoint),
//! and the harmonic extension `P_2 f`.
//!
//! Which quadrature is used depends on the data: per-sphere constants and
//! radial profiles go through the polar reduction in any dimension, sampled
//! and closed-form data on `S^2` through surface rules, and zonal profiles
//! through the Gegenbauer expansion of the Newton kernel.

use serde::Serialize;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, unsupported, Error, Result};
use crate::geometry::{ball_volume_unchecked, distance, norm, sphere_area_unchecked, Component, DomainSpec};
use crate::quadrature::{
    clustered_breaks, focused_sphere_nodes, graded_volume_rule, polar_reduce_sphere_integral,
    polar_rule, polar_rule_with_width, QuadratureRule, SurfaceGrid, VolumeRule,
};
use crate::zonal::{gegenbauer_values, kernel_radial_factors, ZonalBasis, ZonalProfile};

/// Gauss points per panel of the polar rules.
pub const POLAR_ORDER: usize = 24;

pub type RadialFn = Arc<dyn Fn(f64, Component) -> f64 + Send + Sync>;
pub type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync>;

/// Point values on one boundary sphere of a three-dimensional domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledComponent {
    pub grid: SurfaceGrid,
    pub values: Vec<f64>,
}

#[derive(Clone)]
pub enum Representation {
    /// One value per boundary piece, outer sphere first.
    ComponentConstant(Vec<f64>),
    /// Function of `|y|` and the boundary piece. On a sphere this is one
    /// value per piece; on the half-space window it is a genuine profile.
    RadialProfile(RadialFn),
    /// Grid values, `n = 3` only.
    Sampled(Vec<SampledComponent>),
    /// Arbitrary function of the boundary point.
    ClosedForm(PointFn),
    /// Functions of the angle to the `x_n` axis, one nodal vector per sphere.
    Zonal(ZonalProfile),
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::ComponentConstant(v) => f.debug_tuple("ComponentConstant").field(v).finish(),
            Representation::RadialProfile(_) => f.write_str("RadialProfile(..)"),
            Representation::Sampled(s) => write!(f, "Sampled({} components)", s.len()),
            Representation::ClosedForm(_) => f.write_str("ClosedForm(..)"),
            Representation::Zonal(z) => f.debug_tuple("Zonal").field(&z.values()).finish(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryFunction {
    repr: Representation,
    domain: DomainSpec,
}

impl BoundaryFunction {
    pub fn constant(domain: DomainSpec, values: &[f64]) -> Result<Self> {
        domain.validate()?;
        let pieces = domain.boundary().len();
        if values.len() != pieces {
            return Err(invalid(format!("expected {pieces} component values, got {}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("component values must be finite"));
        }
        Ok(Self { repr: Representation::ComponentConstant(values.to_vec()), domain })
    }

    /// `1` on the outer sphere and `a` on the inner one.
    pub fn two_level(domain: DomainSpec, a: f64) -> Result<Self> {
        match domain {
            DomainSpec::Annulus { .. } => Self::constant(domain, &[1.0, a]),
            _ => Err(invalid("two-level data needs an annulus")),
        }
    }

    pub fn radial<F>(domain: DomainSpec, f: F) -> Result<Self>
    where
        F: Fn(f64, Component) -> f64 + Send + Sync + 'static,
    {
        domain.validate()?;
        Ok(Self { repr: Representation::RadialProfile(Arc::new(f)), domain })
    }

    pub fn sampled(domain: DomainSpec, components: Vec<SampledComponent>) -> Result<Self> {
        domain.validate()?;
        if domain.dim() != 3 || !domain.is_spherical() {
            return Err(unsupported("sampled boundary data needs a 3-D ball or annulus"));
        }
        let pieces = domain.boundary();
        if components.len() != pieces.len() {
            return Err(invalid(format!("expected {} sampled components", pieces.len())));
        }
        for (c, p) in components.iter().zip(&pieces) {
            if (c.grid.radius() - p.radius).abs() > 1e-12 * p.radius {
                return Err(invalid("sampled grid radius does not match its boundary sphere"));
            }
            if c.values.len() != c.grid.len() || c.values.iter().any(|v| !v.is_finite()) {
                return Err(invalid("sampled values must be finite, one per grid point"));
            }
        }
        Ok(Self { repr: Representation::Sampled(components), domain })
    }

    /// Samples `f` on product grids of the given resolution.
    pub fn sample<F: Fn(&[f64]) -> f64>(domain: DomainSpec, resolution: usize, f: F) -> Result<Self> {
        let mut comps = Vec::new();
        for p in domain.boundary() {
            let grid = crate::quadrature::surface_grid(domain.dim(), p.radius, p.component, resolution)?;
            let values = grid.points().iter().map(|y| f(y)).collect();
            comps.push(SampledComponent { grid, values });
        }
        Self::sampled(domain, comps)
    }

    pub fn closed_form<F>(domain: DomainSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        domain.validate()?;
        Ok(Self { repr: Representation::ClosedForm(Arc::new(f)), domain })
    }

    pub fn zonal(profile: ZonalProfile) -> Self {
        Self { domain: *profile.domain(), repr: Representation::Zonal(profile) }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// `λ f`, same representation.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let repr = match &self.repr {
            Representation::ComponentConstant(v) => {
                Representation::ComponentConstant(v.iter().map(|x| lambda * x).collect())
            }
            Representation::RadialProfile(g) => {
                let g = g.clone();
                Representation::RadialProfile(Arc::new(move |t, c| lambda * g(t, c)))
            }
            Representation::Sampled(s) => Representation::Sampled(
                s.iter()
                    .map(|c| SampledComponent {
                        grid: c.grid.clone(),
                        values: c.values.iter().map(|v| lambda * v).collect(),
                    })
                    .collect(),
            ),
            Representation::ClosedForm(g) => {
                let g = g.clone();
                Representation::ClosedForm(Arc::new(move |y| lambda * g(y)))
            }
            Representation::Zonal(z) => Representation::Zonal(
                z.with_values(z.values().iter().map(|v| v.iter().map(|x| lambda * x).collect()).collect())?,
            ),
        };
        Ok(Self { repr, domain: self.domain })
    }

    /// Value at a boundary point.
    pub fn value_at(&self, y: &[f64]) -> Result<f64> {
        let piece = self
            .domain
            .boundary_piece_of(y)
            .ok_or_else(|| Error::Domain(format!("{y:?} is not on the boundary")))?;
        let idx = self.piece_index(piece.component);
        Ok(match &self.repr {
            Representation::ComponentConstant(v) => v[idx],
            Representation::RadialProfile(g) => match piece.component {
                Component::Flat => g(norm(&y[..y.len() - 1]), Component::Flat),
                c => g(piece.radius, c),
            },
            Representation::Sampled(s) => s[idx].grid.interpolate(&s[idx].values, y),
            Representation::ClosedForm(g) => g(y),
            Representation::Zonal(z) => z.evaluate(y)?,
        })
    }

    fn piece_index(&self, c: Component) -> usize {
        usize::from(c == Component::Inner)
    }

    /// Per-sphere constants, when the data is constant on every boundary sphere.
    pub(crate) fn sphere_constants(&self) -> Option<Vec<f64>> {
        if !self.domain.is_spherical() {
            return None;
        }
        match &self.repr {
            Representation::ComponentConstant(v) => Some(v.clone()),
            Representation::RadialProfile(g) => {
                Some(self.domain.boundary().iter().map(|p| g(p.radius, p.component)).collect())
            }
            _ => None,
        }
    }

    /// Representative values (grid nodes or per-piece constants), for sign checks.
    pub fn sample_values(&self) -> Result<Vec<f64>> {
        if let Some(c) = self.sphere_constants() {
            return Ok(c);
        }
        match &self.repr {
            Representation::Sampled(s) => Ok(s.iter().flat_map(|c| c.values.iter().copied()).collect()),
            Representation::Zonal(z) => Ok(z.values().iter().flatten().copied().collect()),
            Representation::RadialProfile(g) => {
                let radius = self.domain.radial_extent().1;
                Ok(QuadratureRule::composite(&window_breaks(radius, 0.0, 1e-3 * radius), 8)?
                    .nodes()
                    .iter()
                    .map(|t| g(*t, Component::Flat))
                    .collect())
            }
            Representation::ClosedForm(g) => {
                let mut out = Vec::new();
                for p in self.domain.boundary() {
                    let grid = crate::quadrature::surface_grid(self.domain.dim(), p.radius, p.component, 16)?;
                    out.extend(grid.points().iter().map(|y| g(y)));
                }
                Ok(out)
            }
            Representation::ComponentConstant(v) => Ok(v.clone()),
        }
    }
}

/// Which operator produced a field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Provenance {
    RieszExtension { alpha: f64 },
    HarmonicExtension,
    Supplied,
}

/// What the field depends on; decides how volume integrals are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldSymmetry {
    /// Depends on `|x|` only.
    Radial,
    /// Depends on `|x|` and `x_n / |x|`.
    Zonal,
    General,
}

#[derive(Clone)]
pub struct InteriorField {
    evaluator: FieldFn,
    domain: DomainSpec,
    symmetry: FieldSymmetry,
    provenance: Provenance,
}

impl fmt::Debug for InteriorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InteriorField")
            .field("domain", &self.domain)
            .field("symmetry", &self.symmetry)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl InteriorField {
    pub fn new(domain: DomainSpec, symmetry: FieldSymmetry, provenance: Provenance, evaluator: FieldFn) -> Self {
        Self { evaluator, domain, symmetry, provenance }
    }

    pub fn radial<F: Fn(f64) -> f64 + Send + Sync + 'static>(domain: DomainSpec, g: F) -> Self {
        Self::new(domain, FieldSymmetry::Radial, Provenance::Supplied, Arc::new(move |x| Ok(g(norm(x)))))
    }

    /// `g(|x|, x_n / |x|)`.
    pub fn zonal<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(domain: DomainSpec, g: F) -> Self {
        let eval = move |x: &[f64]| {
            let rho = norm(x);
            let t = if rho > 0.0 { x[x.len() - 1] / rho } else { 1.0 };
            Ok(g(rho, t))
        };
        Self::new(domain, FieldSymmetry::Zonal, Provenance::Supplied, Arc::new(eval))
    }

    pub fn general<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(domain: DomainSpec, g: F) -> Self {
        Self::new(domain, FieldSymmetry::General, Provenance::Supplied, Arc::new(move |x| Ok(g(x))))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        (self.evaluator)(x)
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn symmetry(&self) -> FieldSymmetry {
        self.symmetry
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `λ g`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let inner = self.evaluator.clone();
        Self { evaluator: Arc::new(move |x| Ok(lambda * inner(x)?)), ..self.clone() }
    }
}

fn check_alpha(alpha: f64, n: usize) -> Result<()> {
    if alpha > 1.0 && alpha < n as f64 {
        Ok(())
    } else {
        Err(invalid(format!("order α = {alpha} must lie in (1, {n})")))
    }
}

fn check_interior(domain: &DomainSpec, x: &[f64]) -> Result<()> {
    if domain.contains(x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{x:?} is not strictly inside the domain")))
    }
}

fn unit_axis3(x: &[f64]) -> [f64; 3] {
    let s = norm(x);
    if s > 0.0 {
        [x[0] / s, x[1] / s, x[2] / s]
    } else {
        [0.0, 0.0, 1.0]
    }
}

/// Panel breaks on `[0, radius]` clustered at `0` and on both sides of `s`.
fn window_breaks(radius: f64, s: f64, width: f64) -> Vec<f64> {
    let mut breaks = clustered_breaks(0.0, radius, width);
    if s > 0.0 && s < radius {
        breaks.extend(clustered_breaks(0.0, s, width).iter().map(|b| s - b));
        breaks.extend(clustered_breaks(s, radius, width));
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * radius);
    breaks
}

/// Riesz extension of a radial profile on the flat window `B_R^{n-1}`.
fn window_extension(g: &RadialFn, n: usize, radius: f64, alpha: f64, x: &[f64]) -> Result<f64> {
    let xn = x[n - 1];
    let s = norm(&x[..n - 1]);
    let power = 0.5 * (alpha - n as f64);
    let kernel = |d: f64| (d * d + xn * xn).powf(power);
    let outer = QuadratureRule::composite(&window_breaks(radius, s, xn), 16)?;
    let mut total = 0.0;
    for (t, w) in outer.iter() {
        let width = if s > 0.0 {
            (((t - s).powi(2) + xn * xn) / (t * s)).sqrt()
        } else {
            f64::INFINITY
        };
        let rule = polar_rule_with_width(width, 16)?;
        // the circle of radius t in the window, seen from the foot point x'
        let ring = polar_reduce_sphere_integral(n - 1, t, s, kernel, &rule)?;
        total += w * g(t, Component::Flat) * ring;
    }
    Ok(total)
}

/// Sampled data: plain grid sums far from the sphere, singularity
/// subtraction of the interpolated value near it.
fn sampled_sphere_integral<K: Fn(f64) -> f64>(c: &SampledComponent, x: &[f64], kernel: K, exact_constant: f64) -> f64 {
    let rho = c.grid.radius();
    let gap = (norm(x) - rho).abs();
    let spacing = std::f64::consts::PI * rho / c.grid.resolution() as f64;
    let sum_with = |shift: f64| -> f64 {
        c.grid
            .points()
            .iter()
            .zip(c.grid.weights())
            .zip(&c.values)
            .map(|((y, w), v)| w * (v - shift) * kernel(distance(x, y)))
            .sum()
    };
    if gap > 4.0 * spacing {
        sum_with(0.0)
    } else {
        let shift = c.grid.interpolate(&c.values, x);
        sum_with(shift) + shift * exact_constant
    }
}

/// `E_α f(x)` for `x` strictly inside the domain.
pub fn extend_riesz(f: &BoundaryFunction, alpha: f64, x: &[f64]) -> Result<f64> {
    let domain = f.domain;
    let n = domain.dim();
    check_alpha(alpha, n)?;
    check_interior(&domain, x)?;
    let power = alpha - n as f64;
    let kernel = move |d: f64| d.powf(power);
    let s = norm(x);

    if let Some(values) = f.sphere_constants() {
        let mut total = 0.0;
        for (p, v) in domain.boundary().iter().zip(values) {
            if v != 0.0 {
                let rule = polar_rule(s, p.radius, POLAR_ORDER)?;
                total += v * polar_reduce_sphere_integral(n, p.radius, s, kernel, &rule)?;
            }
        }
        return Ok(total);
    }
    match (&f.repr, domain) {
        (Representation::RadialProfile(g), DomainSpec::HalfSpaceWindow { radius, .. }) => {
            window_extension(g, n, radius, alpha, x)
        }
        (Representation::Sampled(comps), _) => {
            let mut total = 0.0;
            for c in comps {
                let rule = polar_rule(s, c.grid.radius(), POLAR_ORDER)?;
                let exact = polar_reduce_sphere_integral(3, c.grid.radius(), s, kernel, &rule)?;
                total += sampled_sphere_integral(c, x, kernel, exact);
            }
            Ok(total)
        }
        (Representation::ClosedForm(g), d) if d.is_spherical() && n == 3 => {
            let axis = unit_axis3(x);
            let mut total = 0.0;
            for p in domain.boundary() {
                let rule = polar_rule(s, p.radius, POLAR_ORDER)?;
                for (y, w) in focused_sphere_nodes(p.radius, axis, &rule, 2 * POLAR_ORDER) {
                    total += w * g(&y) * kernel(distance(x, &y));
                }
            }
            Ok(total)
        }
        (Representation::Zonal(z), _) => {
            if (alpha - 2.0).abs() > 1e-15 {
                return Err(unsupported("zonal data is extended with the Newton kernel only (α = 2)"));
            }
            Ok(z.extension_at(x))
        }
        (repr, d) => Err(unsupported(format!("Riesz extension of {repr:?} on {d:?}"))),
    }
}

/// `E_α f` as a field on the domain.
pub fn extension_field(f: &BoundaryFunction, alpha: f64) -> Result<InteriorField> {
    check_alpha(alpha, f.domain.dim())?;
    let symmetry = if f.sphere_constants().is_some() {
        FieldSymmetry::Radial
    } else if matches!(f.repr, Representation::Zonal(_)) {
        FieldSymmetry::Zonal
    } else {
        FieldSymmetry::General
    };
    let data = f.clone();
    Ok(InteriorField::new(
        f.domain,
        symmetry,
        Provenance::RieszExtension { alpha },
        Arc::new(move |x| extend_riesz(&data, alpha, x)),
    ))
}

/// `R_α g(y) = ∫_Ω g(x) |x - y|^{α-n} dx` for `y` on a boundary sphere.
pub fn restrict_riesz(g: &InteriorField, alpha: f64, y: &[f64]) -> Result<f64> {
    let rule = graded_volume_rule(&g.domain, 3.0, 64, 32)?;
    restrict_riesz_with(g, alpha, y, &rule)
}

pub fn restrict_riesz_with(g: &InteriorField, alpha: f64, y: &[f64], rule: &VolumeRule) -> Result<f64> {
    let domain = g.domain;
    let n = domain.dim();
    check_alpha(alpha, n)?;
    if !domain.is_spherical() {
        return Err(unsupported("restriction onto the half-space window"));
    }
    domain
        .boundary_piece_of(y)
        .ok_or_else(|| Error::Domain(format!("{y:?} is not on the boundary")))?;
    let power = alpha - n as f64;
    let kernel = move |d: f64| d.powf(power);
    let s = norm(y);
    let area = sphere_area_unchecked(n, 1.0);
    let radial = rule.radial();

    match g.symmetry {
        FieldSymmetry::Radial => {
            let mut total = 0.0;
            let mut axis = vec![0.0; n];
            for (rho, w) in radial.iter() {
                axis[n - 1] = rho;
                let value = checked(g.eval(&axis)?, &axis)?;
                let pr = polar_rule(s, rho, POLAR_ORDER)?;
                let shell = polar_reduce_sphere_integral(n, rho, s, kernel, &pr)?;
                // w carries the shell area; the shell integral already has it
                total += w / sphere_area_unchecked(n, rho) * value * shell;
            }
            Ok(total)
        }
        FieldSymmetry::Zonal => {
            if (alpha - 2.0).abs() > 1e-15 {
                return Err(unsupported("zonal restriction uses the Newton kernel only (α = 2)"));
            }
            let basis = ZonalBasis::new(n, rule.angular_order())?;
            let len = basis.len();
            let ty = y[n - 1] / s;
            let mut cy = vec![0.0; len];
            gegenbauer_values(basis.lambda(), ty, &mut cy);
            let mut k = vec![0.0; len];
            let mut total = 0.0;
            for (rho, w) in radial.iter() {
                let shell: Vec<f64> = basis
                    .nodes()
                    .iter()
                    .map(|t| {
                        let x = zonal_point(n, rho, *t);
                        checked(g.eval(&x)?, &x)
                    })
                    .collect::<Result<_>>()?;
                let coeffs = basis.coefficients(&shell);
                kernel_radial_factors(n, rho, s, &mut k);
                let sum: f64 = (0..len)
                    .map(|l| coeffs[l] * basis.single_layer_multiplier(l) * k[l] * cy[l])
                    .sum();
                total += w / area * sum;
            }
            Ok(total)
        }
        FieldSymmetry::General => {
            if n != 3 {
                return Err(unsupported("restriction of general fields needs n = 3"));
            }
            let axis = unit_axis3(y);
            let mut total = 0.0;
            for (rho, w) in radial.iter() {
                let pr = polar_rule(s, rho, POLAR_ORDER)?;
                let mut shell = 0.0;
                for (x, wx) in focused_sphere_nodes(rho, axis, &pr, 2 * POLAR_ORDER) {
                    shell += wx * checked(g.eval(&x)?, &x)? * kernel(distance(&x, y));
                }
                total += w / sphere_area_unchecked(3, rho) * shell;
            }
            Ok(total)
        }
    }
}

fn zonal_point(n: usize, rho: f64, t: f64) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[0] = rho * (1.0 - t * t).max(0.0).sqrt();
    x[n - 1] = rho * t;
    x
}

fn checked(value: f64, x: &[f64]) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation { location: x.to_vec(), value })
    }
}

/// `P_2 f(x)`: the harmonic function with boundary values `f`.
pub fn harmonic_extend(f: &BoundaryFunction, x: &[f64]) -> Result<f64> {
    let domain = f.domain;
    let n = domain.dim();
    check_interior(&domain, x)?;
    if let Some(values) = f.sphere_constants() {
        return Ok(match domain {
            DomainSpec::Annulus { inner, .. } => {
                // u = c1 |x|^{2-n} + c2 through both boundary values
                let rn2 = inner.powi(n as i32 - 2);
                let det = 1.0 - rn2;
                let c1 = rn2 * (values[1] - values[0]) / det;
                let c2 = (values[0] - values[1] * rn2) / det;
                c1 * norm(x).powi(2 - n as i32) + c2
            }
            _ => values[0],
        });
    }
    let s2 = norm(x).powi(2);
    let poisson = move |d: f64| (1.0 - s2) / (3.0 * ball_volume_unchecked(3) * d.powi(3));
    match (&f.repr, domain) {
        (Representation::Zonal(z), _) => Ok(z.harmonic_at(x)),
        (Representation::Sampled(comps), DomainSpec::Ball { .. }) => {
            // the Poisson kernel integrates to one
            Ok(sampled_sphere_integral(&comps[0], x, poisson, 1.0))
        }
        (Representation::ClosedForm(g), DomainSpec::Ball { .. }) if n == 3 => {
            let axis = unit_axis3(x);
            let foot = g(&axis);
            let rule = polar_rule(norm(x), 1.0, POLAR_ORDER)?;
            let sum: f64 = focused_sphere_nodes(1.0, axis, &rule, 2 * POLAR_ORDER)
                .iter()
                .map(|(y, w)| w * (g(y) - foot) * poisson(distance(x, y)))
                .sum();
            Ok(sum + foot)
        }
        (repr, d) => Err(unsupported(format!("harmonic extension of {repr:?} on {d:?}"))),
    }
}

/// `P_2 f` as a field on the domain.
pub fn harmonic_field(f: &BoundaryFunction) -> Result<InteriorField> {
    let symmetry = if f.sphere_constants().is_some() {
        FieldSymmetry::Radial
    } else if matches!(f.repr, Representation::Zonal(_)) {
        FieldSymmetry::Zonal
    } else {
        FieldSymmetry::General
    };
    // fail early on unsupported pairs
    let mut probe = vec![0.0; f.domain.dim()];
    probe[0] = 0.5 * (f.domain.radial_extent().0 + f.domain.radial_extent().1.min(1.0));
    harmonic_extend(f, &probe)?;
    let data = f.clone();
    Ok(InteriorField::new(
        f.domain,
        symmetry,
        Provenance::HarmonicExtension,
        Arc::new(move |x| harmonic_extend(&data, x)),
    ))
}

/// `(∫_{∂Ω} |f|^p dS)^{1/p}`.
pub fn lp_norm_boundary(f: &BoundaryFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid(format!("exponent {p} below 1")));
    }
    let n = f.domain.dim();
    let integral = if let Some(values) = f.sphere_constants() {
        f.domain
            .boundary()
            .iter()
            .zip(values)
            .map(|(piece, v)| sphere_area_unchecked(n, piece.radius) * v.abs().powf(p))
            .sum()
    } else {
        match (&f.repr, f.domain) {
            (Representation::RadialProfile(g), DomainSpec::HalfSpaceWindow { radius, .. }) => {
                let rule = QuadratureRule::composite(&clustered_breaks(0.0, radius, 1e-12 * radius), 16)?;
                let ring = sphere_area_unchecked(n - 1, 1.0);
                ring * rule.integrate(|t| g(t, Component::Flat).abs().powf(p) * t.powi(n as i32 - 2))
            }
            (Representation::Sampled(comps), _) => comps
                .iter()
                .map(|c| c.grid.weights().iter().zip(&c.values).map(|(w, v)| w * v.abs().powf(p)).sum::<f64>())
                .sum(),
            (Representation::ClosedForm(g), d) if d.is_spherical() && n == 3 => {
                let mut total = 0.0;
                for piece in d.boundary() {
                    let grid = crate::quadrature::surface_grid(3, piece.radius, piece.component, 64)?;
                    total += grid.integrate(|y| g(y).abs().powf(p));
                }
                total
            }
            (Representation::Zonal(z), d) => d
                .boundary()
                .iter()
                .zip(z.values())
                .map(|(piece, vals)| {
                    piece.radius.powi(n as i32 - 1)
                        * z.basis().weights().iter().zip(vals).map(|(w, v)| w * v.abs().powf(p)).sum::<f64>()
                })
                .sum(),
            (repr, d) => return Err(unsupported(format!("boundary norm of {repr:?} on {d:?}"))),
        }
    };
    Ok(integral.powf(1.0 / p))
}

/// A quadrature value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub error: f64,
}

impl NormValue {
    pub fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }
}

/// Volume-rule parameters for interior integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeOptions {
    pub grading: f64,
    pub radial_order: usize,
    pub angular_order: usize,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        Self { grading: 3.0, radial_order: 64, angular_order: 32 }
    }
}

/// `∫_Ω F(g(x)) dx` on one volume rule.
pub fn integrate_field<F: Fn(f64) -> f64>(g: &InteriorField, rule: &VolumeRule, transform: F) -> Result<f64> {
    let n = g.domain.dim();
    let radial = rule.radial();
    match g.symmetry {
        FieldSymmetry::Radial => {
            let mut x = vec![0.0; n];
            let mut total = 0.0;
            for (rho, w) in radial.iter() {
                x[n - 1] = rho;
                total += w * transform(checked(g.eval(&x)?, &x)?);
            }
            Ok(total)
        }
        FieldSymmetry::Zonal => {
            if !g.domain.is_spherical() {
                return Err(unsupported("zonal fields on a half-space window"));
            }
            let angular = crate::zonal::gegenbauer_rule(n, rule.angular_order())?;
            let area = sphere_area_unchecked(n, 1.0);
            let mut total = 0.0;
            for (rho, w) in radial.iter() {
                let mut shell = 0.0;
                for (t, wt) in angular.iter() {
                    let x = zonal_point(n, rho, t);
                    shell += wt * transform(checked(g.eval(&x)?, &x)?);
                }
                total += w / area * shell;
            }
            Ok(total)
        }
        FieldSymmetry::General => {
            if n != 3 || !g.domain.is_spherical() {
                return Err(unsupported("general fields are integrated on 3-D balls and annuli only"));
            }
            let grid = crate::quadrature::surface_grid(3, 1.0, Component::Outer, rule.angular_order().max(4))?;
            let mut total = 0.0;
            for (rho, w) in radial.iter() {
                let mut shell = 0.0;
                for (p, wp) in grid.points().iter().zip(grid.weights()) {
                    let x = [rho * p[0], rho * p[1], rho * p[2]];
                    shell += wp * transform(checked(g.eval(&x)?, &x)?);
                }
                total += w / (4.0 * std::f64::consts::PI) * shell;
            }
            Ok(total)
        }
    }
}

/// `∫_Ω F(g) dx` with an error estimate from a rule of half the orders.
pub fn integrate_field_estimated<F: Fn(f64) -> f64>(
    g: &InteriorField,
    opts: &VolumeOptions,
    transform: F,
) -> Result<NormValue> {
    let fine = graded_volume_rule(&g.domain, opts.grading, opts.radial_order, opts.angular_order)?;
    let value = integrate_field(g, &fine, &transform)?;
    let coarse = integrate_field(g, &fine.coarsened()?, &transform)?;
    Ok(NormValue { value, error: (value - coarse).abs() + rounding_floor(value) })
}

fn rounding_floor(value: f64) -> f64 {
    64.0 * f64::EPSILON * value.abs()
}

/// `(∫_Ω |g|^q dx)^{1/q}` with the default graded rule.
pub fn lq_norm_interior(g: &InteriorField, q: f64) -> Result<NormValue> {
    lq_norm_interior_with(g, q, &VolumeOptions::default())
}

pub fn lq_norm_interior_with(g: &InteriorField, q: f64, opts: &VolumeOptions) -> Result<NormValue> {
    if !(q >= 1.0) {
        return Err(invalid(format!("exponent {q} below 1")));
    }
    let fine = graded_volume_rule(&g.domain, opts.grading, opts.radial_order, opts.angular_order)?;
    let value = integrate_field(g, &fine, |v| v.abs().powf(q))?.powf(1.0 / q);
    let coarse = integrate_field(g, &fine.coarsened()?, |v| v.abs().powf(q))?.powf(1.0 / q);
    Ok(NormValue { value, error: (value - coarse).abs() + rounding_floor(value) })
}
