//! Domains and the ball-volume convention.
//!
//! Throughout the crate `omega(n)` denotes the volume of the unit ball, so the
//! unit sphere has area `n * omega(n)`. Every closed form and acceptance value
//! uses this normalization.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Largest supported dimension.
pub const MAX_DIMENSION: usize = 16;

/// Volume of the unit ball in `R^n`, `pi^(n/2) / Gamma(n/2 + 1)`.
///
/// Evaluated through the recursion `omega(n) = 2 pi / n * omega(n - 2)`, which is
/// exact in the Gamma function and stable for every supported `n`.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(ball_volume_unchecked(n))
}

pub(crate) fn ball_volume_unchecked(n: usize) -> f64 {
    let mut v = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v
}

/// Area of the sphere of radius `rho` in `R^n`: `n omega(n) rho^(n-1)`.
pub fn sphere_area(n: usize, rho: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(sphere_area_unchecked(n, rho))
}

pub(crate) fn sphere_area_unchecked(n: usize, rho: f64) -> f64 {
    n as f64 * ball_volume_unchecked(n) * rho.powi(n as i32 - 1)
}

/// Which piece of the boundary a point or a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Component {
    /// The unit sphere `|y| = 1` (ball and annulus).
    Outer,
    /// The hole `|y| = r` of an annulus.
    Inner,
    /// The flat disk `B_R^{n-1}` of a half-space window.
    Flat,
}

/// A boundary sphere (or disk) with its radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPiece {
    pub component: Component,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DomainKind {
    Ball,
    Annulus,
    HalfSpaceWindow,
}

/// The computational domain.
///
/// * `Ball`: the unit ball `B_1`.
/// * `Annulus`: `A_r = B_1 \ B_r`, boundary `|y| = 1` and `|y| = r`.
/// * `HalfSpaceWindow`: `B_R^+ = B_R ∩ {x_n > 0}` with boundary patch `B_R^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Ball { n: usize },
    Annulus { n: usize, inner: f64 },
    HalfSpaceWindow { n: usize, radius: f64 },
}

fn check_dimension(n: usize) -> Result<()> {
    if (3..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(n))
    }
}

impl DomainSpec {
    pub fn ball(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(DomainSpec::Ball { n })
    }

    pub fn annulus(n: usize, inner: f64) -> Result<Self> {
        check_dimension(n)?;
        if !(inner > 0.0 && inner < 1.0) {
            return Err(invalid(format!("annulus inner radius {inner} not in (0, 1)")));
        }
        Ok(DomainSpec::Annulus { n, inner })
    }

    pub fn half_space_window(n: usize, radius: f64) -> Result<Self> {
        check_dimension(n)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("window radius {radius} must be positive")));
        }
        Ok(DomainSpec::HalfSpaceWindow { n, radius })
    }

    /// Re-checks the invariants; useful for values built by struct literal.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::Ball { n } => Self::ball(n).map(|_| ()),
            DomainSpec::Annulus { n, inner } => Self::annulus(n, inner).map(|_| ()),
            DomainSpec::HalfSpaceWindow { n, radius } => {
                Self::half_space_window(n, radius).map(|_| ())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            DomainSpec::Ball { n }
            | DomainSpec::Annulus { n, .. }
            | DomainSpec::HalfSpaceWindow { n, .. } => n,
        }
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            DomainSpec::Ball { .. } => DomainKind::Ball,
            DomainSpec::Annulus { .. } => DomainKind::Annulus,
            DomainSpec::HalfSpaceWindow { .. } => DomainKind::HalfSpaceWindow,
        }
    }

    /// `true` for the ball and the annulus, whose boundaries are spheres.
    pub fn is_spherical(&self) -> bool {
        !matches!(self, DomainSpec::HalfSpaceWindow { .. })
    }

    /// Boundary pieces in a fixed order: outer sphere first, then the hole.
    pub fn boundary(&self) -> Vec<BoundaryPiece> {
        match *self {
            DomainSpec::Ball { .. } => vec![BoundaryPiece { component: Component::Outer, radius: 1.0 }],
            DomainSpec::Annulus { inner, .. } => vec![
                BoundaryPiece { component: Component::Outer, radius: 1.0 },
                BoundaryPiece { component: Component::Inner, radius: inner },
            ],
            DomainSpec::HalfSpaceWindow { radius, .. } => {
                vec![BoundaryPiece { component: Component::Flat, radius }]
            }
        }
    }

    /// Lebesgue measure `|Omega|`.
    pub fn volume(&self) -> f64 {
        let n = self.dim();
        let w = ball_volume_unchecked(n);
        match *self {
            DomainSpec::Ball { .. } => w,
            DomainSpec::Annulus { inner, .. } => w * (1.0 - inner.powi(n as i32)),
            DomainSpec::HalfSpaceWindow { radius, .. } => 0.5 * w * radius.powi(n as i32),
        }
    }

    /// Surface measure `|∂Omega|` (for the window: the flat disk only).
    pub fn boundary_area(&self) -> f64 {
        let n = self.dim();
        match *self {
            DomainSpec::HalfSpaceWindow { radius, .. } => {
                ball_volume_unchecked(n - 1) * radius.powi(n as i32 - 1)
            }
            _ => self
                .boundary()
                .iter()
                .map(|p| sphere_area_unchecked(n, p.radius))
                .sum(),
        }
    }

    /// Radial extent `[rho_min, rho_max]` of the domain.
    pub fn radial_extent(&self) -> (f64, f64) {
        match *self {
            DomainSpec::Ball { .. } => (0.0, 1.0),
            DomainSpec::Annulus { inner, .. } => (inner, 1.0),
            DomainSpec::HalfSpaceWindow { radius, .. } => (0.0, radius),
        }
    }

    /// Strict interior membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let rho = norm(x);
        match *self {
            DomainSpec::Ball { .. } => rho < 1.0,
            DomainSpec::Annulus { inner, .. } => rho > inner && rho < 1.0,
            DomainSpec::HalfSpaceWindow { radius, .. } => x[x.len() - 1] > 0.0 && rho < radius,
        }
    }

    /// The boundary piece `y` lies on, within a relative tolerance of `1e-12`.
    pub fn boundary_piece_of(&self, y: &[f64]) -> Option<BoundaryPiece> {
        if y.len() != self.dim() {
            return None;
        }
        match *self {
            DomainSpec::HalfSpaceWindow { radius, .. } => {
                let last = y[y.len() - 1];
                let planar = norm(&y[..y.len() - 1]);
                (last.abs() <= 1e-12 * radius.max(1.0) && planar <= radius)
                    .then_some(BoundaryPiece { component: Component::Flat, radius })
            }
            _ => {
                let rho = norm(y);
                self.boundary()
                    .into_iter()
                    .find(|p| (rho - p.radius).abs() <= 1e-12 * p.radius)
            }
        }
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}
