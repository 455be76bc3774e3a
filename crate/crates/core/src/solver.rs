//! Nonlinear power iteration for the subcritical extension problem
//!
//! `maximize ‖E_2 f‖_{L^q(Ω)}` subject to `‖f‖_{L^{2(n-1)/n}(∂Ω)} = 1`.
//!
//! Stationary points satisfy `R_2[(E_2 f)^{q-1}] = λ f^{(n-2)/n}`, so the
//! iteration is `f ← normalize((R_2[(E_2 f)^{q-1}])^{n/(n-2)})`.
//!
//! Boundary data is zonal: nodal values at Gauss–Gegenbauer points on each
//! sphere. The interior uses the graded radial rule times the same angular
//! nodes, and `E_2`, `R_2` act mode by mode through the Funk–Hecke
//! multipliers. With a shared normalization `h_l` the discrete `R_2` is the
//! exact adjoint of the discrete `E_2`, which makes the iteration monotone up
//! to rounding. A damping safeguard guards the remaining cases.

use serde::Serialize;
use std::sync::Arc;

use crate::closed_forms::{boundary_exponent, critical_exponent, sharp_constant_ball};
use crate::error::{invalid, unsupported, Error, Result};
use crate::extension::{BoundaryFunction, Representation};
use crate::geometry::{Component, DomainSpec};
use crate::quadrature::graded_volume_rule;
use crate::zonal::{kernel_radial_factors, ZonalBasis, ZonalProfile};

/// Discretization of boundary data and of the interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryGrid {
    /// Gauss–Gegenbauer nodes per boundary sphere.
    pub nodes_per_sphere: usize,
    /// Radial Gauss order per graded segment.
    pub radial_order: usize,
    pub grading: f64,
}

impl Default for BoundaryGrid {
    fn default() -> Self {
        Self { nodes_per_sphere: 64, radial_order: 64, grading: 3.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    pub q: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Weight of the new iterate, in `(0, 1]`.
    pub damping: f64,
    pub grid: BoundaryGrid,
}

impl SolverConfig {
    pub fn new(q: f64) -> Self {
        Self { q, tol: 1e-8, max_iter: 500, damping: 1.0, grid: BoundaryGrid::default() }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let crit = critical_exponent(n);
        if !(self.q > 2.0 && self.q < crit) {
            return Err(invalid(format!("q = {} must lie in (2, {crit})", self.q)));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tolerance must be positive"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(invalid(format!("damping {} must lie in (0, 1]", self.damping)));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be positive"));
        }
        if self.grid.nodes_per_sphere < 2 || self.grid.radial_order < 2 {
            return Err(invalid("grid needs at least two nodes per direction"));
        }
        Ok(())
    }
}

/// Nodal values on one boundary sphere, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileSamples {
    pub component: Component,
    pub radius: f64,
    /// `cos θ` of the nodes.
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverReport {
    pub n: usize,
    pub domain: DomainSpec,
    pub q: f64,
    #[serde(skip)]
    pub final_f: BoundaryFunction,
    pub profile: Vec<ProfileSamples>,
    /// Quotient after every accepted iterate, starting with the initial one.
    pub quotient_history: Vec<f64>,
    /// Fixed-point residual of every step.
    pub residual_history: Vec<f64>,
    pub quotient: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `‖f‖_{L^{2(n-1)/n}}` of the final iterate.
    pub boundary_norm: f64,
    /// On the ball, `|B_1|^{1/q - (n-2)/(2n)}` times the sharp constant.
    pub holder_bound: Option<f64>,
}

/// Discrete operators for one domain, exponent and grid.
#[derive(Debug, Clone)]
pub struct ExtremalProblem {
    domain: DomainSpec,
    q: f64,
    basis: Arc<ZonalBasis>,
    radii: Vec<f64>,
    rho: Vec<f64>,
    /// Volume weights for `ρ^{n-1} dρ`.
    wrho: Vec<f64>,
    /// `R_c^{n-1} μ_l K_l(ρ_i, R_c)`, indexed `[c][i * L + l]`.
    ext: Vec<Vec<f64>>,
    /// `μ_l / h_l · w_i K_l(ρ_i, R_c)`, same layout.
    res: Vec<Vec<f64>>,
}

impl ExtremalProblem {
    pub fn new(domain: &DomainSpec, q: f64, grid: &BoundaryGrid) -> Result<Self> {
        domain.validate()?;
        if !domain.is_spherical() {
            return Err(unsupported("the extremal solver runs on the ball and the annulus"));
        }
        let n = domain.dim();
        let basis = Arc::new(ZonalBasis::new(n, grid.nodes_per_sphere)?);
        let vol = graded_volume_rule(domain, grid.grading, grid.radial_order, grid.nodes_per_sphere)?;
        let rho = vol.radial().nodes().to_vec();
        let wrho = vol.radial_measure_weights();
        let len = basis.len();
        let radii: Vec<f64> = domain.boundary().iter().map(|p| p.radius).collect();
        let mut ext = Vec::new();
        let mut res = Vec::new();
        let mut k = vec![0.0; len];
        for &radius in &radii {
            let area = radius.powi(n as i32 - 1);
            let mut e = vec![0.0; rho.len() * len];
            let mut r = vec![0.0; rho.len() * len];
            for (i, (&p, &w)) in rho.iter().zip(&wrho).enumerate() {
                kernel_radial_factors(n, p, radius, &mut k);
                for l in 0..len {
                    let mu = basis.single_layer_multiplier(l);
                    e[i * len + l] = area * mu * k[l];
                    r[i * len + l] = mu / basis.norms()[l] * w * k[l];
                }
            }
            ext.push(e);
            res.push(r);
        }
        Ok(Self { domain: *domain, q, basis, radii, rho, wrho, ext, res })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn basis(&self) -> &Arc<ZonalBasis> {
        &self.basis
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `E_2 f` at the interior nodes, indexed `[i * L + k]`.
    pub fn extend(&self, values: &[Vec<f64>]) -> Vec<f64> {
        let len = self.basis.len();
        let coeffs: Vec<Vec<f64>> = values.iter().map(|v| self.basis.coefficients(v)).collect();
        let mut field = vec![0.0; self.rho.len() * len];
        let mut modes = vec![0.0; len];
        for i in 0..self.rho.len() {
            modes.iter_mut().for_each(|m| *m = 0.0);
            for (c, a) in coeffs.iter().enumerate() {
                let row = &self.ext[c][i * len..(i + 1) * len];
                for l in 0..len {
                    modes[l] += a[l] * row[l];
                }
            }
            for k in 0..len {
                let table = self.basis.table_row(k);
                field[i * len + k] = modes.iter().zip(table).map(|(m, t)| m * t).sum();
            }
        }
        field
    }

    /// `R_2 g` at the boundary nodes; the exact adjoint of [`Self::extend`].
    pub fn restrict(&self, field: &[f64]) -> Vec<Vec<f64>> {
        let len = self.basis.len();
        let w = self.basis.weights();
        // B_il = Σ_k w_k g_ik C_l(t_k)
        let mut b = vec![0.0; self.rho.len() * len];
        for i in 0..self.rho.len() {
            for k in 0..len {
                let gk = w[k] * field[i * len + k];
                if gk != 0.0 {
                    let table = self.basis.table_row(k);
                    for l in 0..len {
                        b[i * len + l] += gk * table[l];
                    }
                }
            }
        }
        self.res
            .iter()
            .map(|res| {
                let mut modes = vec![0.0; len];
                for i in 0..self.rho.len() {
                    for l in 0..len {
                        modes[l] += res[i * len + l] * b[i * len + l];
                    }
                }
                (0..len)
                    .map(|j| self.basis.table_row(j).iter().zip(&modes).map(|(t, m)| t * m).sum())
                    .collect()
            })
            .collect()
    }

    /// Discrete `(∫_{∂Ω} |f|^p)^{1/p}`.
    pub fn boundary_norm(&self, values: &[Vec<f64>], p: f64) -> f64 {
        let n = self.domain.dim() as i32;
        let w = self.basis.weights();
        self.radii
            .iter()
            .zip(values)
            .map(|(r, v)| r.powi(n - 1) * v.iter().zip(w).map(|(x, wj)| wj * x.abs().powf(p)).sum::<f64>())
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// Discrete `(∫_Ω |g|^q)^{1/q}` for a field at the interior nodes.
    pub fn interior_norm(&self, field: &[f64], q: f64) -> f64 {
        let len = self.basis.len();
        let w = self.basis.weights();
        let mut total = 0.0;
        for (i, wr) in self.wrho.iter().enumerate() {
            let shell: f64 = (0..len).map(|k| w[k] * field[i * len + k].abs().powf(q)).sum();
            total += wr * shell;
        }
        total.powf(1.0 / q)
    }

    /// `‖E_2 f‖_{L^q} / ‖f‖_{L^{2(n-1)/n}}`.
    pub fn quotient(&self, values: &[Vec<f64>]) -> f64 {
        let p = boundary_exponent(self.domain.dim());
        self.interior_norm(&self.extend(values), self.q) / self.boundary_norm(values, p)
    }

    pub fn normalize(&self, values: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let s = self.boundary_norm(values, boundary_exponent(self.domain.dim()));
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Degenerate("boundary data has zero norm".into()));
        }
        Ok(values.iter().map(|v| v.iter().map(|x| x / s).collect()).collect())
    }

    /// One undamped step, normalized.
    pub fn step(&self, values: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let q = self.q;
        let power = self.domain.dim() as f64 / (self.domain.dim() as f64 - 2.0);
        let g: Vec<f64> = self.extend(values).iter().map(|v| v.abs().powf(q - 1.0).copysign(*v)).collect();
        let h = self.restrict(&g);
        let next: Vec<Vec<f64>> = h
            .iter()
            .map(|v| v.iter().map(|x| x.max(0.0).powf(power)).collect())
            .collect();
        self.normalize(&next)
    }

    /// Nodal values of zonal-compatible boundary data on this grid.
    pub fn nodal_values(&self, f: &BoundaryFunction) -> Result<Vec<Vec<f64>>> {
        if f.domain() != &self.domain {
            return Err(invalid("boundary data lives on a different domain"));
        }
        let len = self.basis.len();
        let values: Vec<Vec<f64>> = match f.representation() {
            Representation::ComponentConstant(v) => v.iter().map(|c| vec![*c; len]).collect(),
            Representation::RadialProfile(g) => self
                .domain
                .boundary()
                .iter()
                .map(|p| vec![g(p.radius, p.component); len])
                .collect(),
            Representation::Zonal(z) => {
                if z.basis().len() == len {
                    z.values().to_vec()
                } else {
                    let coeffs = z.coefficients();
                    coeffs
                        .iter()
                        .map(|c| self.basis.nodes().iter().map(|t| z.basis().evaluate(c, *t)).collect())
                        .collect()
                }
            }
            _ => return Err(unsupported("the solver takes constant, radial or zonal boundary data")),
        };
        let flat = values.iter().flatten();
        if flat.clone().any(|v| !(*v >= 0.0)) {
            return Err(invalid("boundary data must be nonnegative"));
        }
        if flat.clone().all(|v| *v == 0.0) {
            return Err(invalid("boundary data is identically zero"));
        }
        Ok(values)
    }

    pub fn to_boundary_function(&self, values: Vec<Vec<f64>>) -> Result<BoundaryFunction> {
        Ok(BoundaryFunction::zonal(ZonalProfile::new(self.domain, self.basis.clone(), values)?))
    }

    fn profile(&self, values: &[Vec<f64>]) -> Vec<ProfileSamples> {
        self.domain
            .boundary()
            .iter()
            .zip(values)
            .map(|(p, v)| ProfileSamples {
                component: p.component,
                radius: p.radius,
                t: self.basis.nodes().to_vec(),
                values: v.clone(),
            })
            .collect()
    }
}

fn sup_change(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a.iter().flatten().zip(b.iter().flatten()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    diff / scale.max(f64::MIN_POSITIVE)
}

/// One normalized iteration step on the default grid.
pub fn el_step(f: &BoundaryFunction, q: f64) -> Result<BoundaryFunction> {
    let config = SolverConfig::new(q);
    config.validate(f.domain().dim())?;
    let problem = ExtremalProblem::new(f.domain(), q, &config.grid)?;
    let values = problem.nodal_values(f)?;
    problem.to_boundary_function(problem.step(&values)?)
}

/// Quotient of constant data on the unit ball at exponent `q`:
/// `n ω_n |B_1|^{1/q} / (n ω_n)^{n/(2(n-1))}`. Equals the sharp constant at `q = 2*`.
pub fn ball_constant_quotient(n: usize, q: f64) -> Result<f64> {
    let w = crate::geometry::unit_ball_volume(n)?;
    if !(q >= 1.0) {
        return Err(invalid(format!("exponent {q} below 1")));
    }
    let area = n as f64 * w;
    Ok(area * w.powf(1.0 / q) / area.powf(1.0 / boundary_exponent(n)))
}

/// Constant data on the ball, normalized two-level data `a = 2` on the annulus.
pub fn default_init(domain: &DomainSpec) -> Result<BoundaryFunction> {
    match domain {
        DomainSpec::Annulus { .. } => BoundaryFunction::two_level(*domain, 2.0),
        _ => BoundaryFunction::constant(*domain, &[1.0]),
    }
}

const MONOTONE_SLACK: f64 = 1e-12;
const MAX_HALVINGS: usize = 8;

pub fn solve_subcritical(domain: &DomainSpec, config: &SolverConfig, init: &BoundaryFunction) -> Result<SolverReport> {
    config.validate(domain.dim())?;
    let problem = ExtremalProblem::new(domain, config.q, &config.grid)?;
    let start = problem.nodal_values(init)?;
    solve_on(&problem, config, start)
}

fn solve_on(problem: &ExtremalProblem, config: &SolverConfig, start: Vec<Vec<f64>>) -> Result<SolverReport> {
    let n = problem.domain.dim();
    let mut f = problem.normalize(&start)?;
    let mut value = problem.quotient(&f);
    let mut history = vec![value];
    let mut residuals = Vec::new();
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < config.max_iter {
        iterations += 1;
        let full = problem.step(&f)?;
        residual = sup_change(&f, &full);
        residuals.push(residual);
        let mut weight = config.damping;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let mixed: Vec<Vec<f64>> = f
                .iter()
                .zip(&full)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (1.0 - weight) * x + weight * y).collect())
                .collect();
            let candidate = problem.normalize(&mixed)?;
            let cv = problem.quotient(&candidate);
            if cv >= value - MONOTONE_SLACK * value.abs() {
                accepted = Some((candidate, cv));
                break;
            }
            weight *= 0.5;
        }
        let Some((candidate, cv)) = accepted else {
            // no damped step keeps the quotient: keep the earlier iterate
            converged = residual <= config.tol;
            break;
        };
        let change = (cv - value).abs() / value.abs();
        f = candidate;
        value = cv;
        history.push(value);
        if residual <= config.tol && change <= config.tol {
            converged = true;
            break;
        }
    }

    let holder_bound = match problem.domain {
        DomainSpec::Ball { .. } => {
            let nf = n as f64;
            Some(problem.domain.volume().powf(1.0 / config.q - (nf - 2.0) / (2.0 * nf)) * sharp_constant_ball(n)?)
        }
        _ => None,
    };
    Ok(SolverReport {
        n,
        domain: problem.domain,
        q: config.q,
        profile: problem.profile(&f),
        boundary_norm: problem.boundary_norm(&f, boundary_exponent(n)),
        final_f: problem.to_boundary_function(f)?,
        quotient_history: history,
        residual_history: residuals,
        quotient: value,
        residual,
        iterations,
        converged,
        holder_bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationPoint {
    pub q: f64,
    pub estimate: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationReport {
    pub points: Vec<ContinuationPoint>,
    /// Linear extrapolation in `1/q` of the last two estimates to `q = 2*`
    /// (the single estimate when the grid has one point).
    pub extrapolated: f64,
    /// Set when any solve failed to converge.
    pub tentative: bool,
    pub reports: Vec<SolverReport>,
}

/// Warm-started solves along an increasing `q` grid below `2*`.
pub fn continuation_to_critical(
    domain: &DomainSpec,
    q_grid: &[f64],
    config: &SolverConfig,
) -> Result<ContinuationReport> {
    if q_grid.is_empty() {
        return Err(invalid("empty q grid"));
    }
    if q_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("q grid must be strictly increasing"));
    }
    let n = domain.dim();
    let mut current = None;
    let mut points = Vec::new();
    let mut reports = Vec::new();
    for &q in q_grid {
        let cfg = SolverConfig { q, ..*config };
        cfg.validate(n)?;
        let problem = ExtremalProblem::new(domain, q, &cfg.grid)?;
        let start = match current.take() {
            Some(values) => values,
            None => problem.nodal_values(&default_init(domain)?)?,
        };
        let report = solve_on(&problem, &cfg, start)?;
        current = Some(report.profile.iter().map(|p| p.values.clone()).collect());
        points.push(ContinuationPoint {
            q,
            estimate: report.quotient,
            converged: report.converged,
            iterations: report.iterations,
        });
        reports.push(report);
    }
    let extrapolated = match points.as_slice() {
        [.., a, b] => {
            let (x0, x1, xs) = (1.0 / a.q, 1.0 / b.q, 1.0 / critical_exponent(n));
            b.estimate + (a.estimate - b.estimate) * (xs - x1) / (x0 - x1)
        }
        [only] => only.estimate,
        [] => unreachable!(),
    };
    let tentative = points.iter().any(|p| !p.converged);
    Ok(ContinuationReport { points, extrapolated, tentative, reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sphere_area_unchecked;
    use std::f64::consts::PI;

    fn small_grid() -> BoundaryGrid {
        BoundaryGrid { nodes_per_sphere: 16, radial_order: 32, grading: 3.0 }
    }

    #[test]
    fn constants_are_fixed_points_on_the_ball() {
        for n in [3usize, 4, 5] {
            let ball = DomainSpec::ball(n).unwrap();
            let crit = critical_exponent(n);
            for q in [2.5, 0.5 * (2.0 + crit), crit - 0.1] {
                let p = ExtremalProblem::new(&ball, q, &small_grid()).unwrap();
                let c = sphere_area_unchecked(n, 1.0).powf(-1.0 / boundary_exponent(n));
                let f = vec![vec![c; 16]];
                let next = p.step(&f).unwrap();
                assert!(sup_change(&f, &next) <= 1e-12, "n={n} q={q}: {}", sup_change(&f, &next));
            }
        }
    }

    #[test]
    fn discrete_restriction_is_the_adjoint() {
        let d = DomainSpec::annulus(4, 0.3).unwrap();
        let p = ExtremalProblem::new(&d, 3.0, &small_grid()).unwrap();
        let f: Vec<Vec<f64>> = (0..2).map(|c| (0..16).map(|j| 1.0 + 0.1 * (c * 16 + j) as f64).collect()).collect();
        let g: Vec<f64> = (0..p.rho.len() * 16).map(|k| (k as f64 * 0.37).sin()).collect();
        let ef = p.extend(&f);
        let w = p.basis.weights();
        let lhs: f64 = (0..p.rho.len())
            .map(|i| p.wrho[i] * (0..16).map(|k| w[k] * ef[i * 16 + k] * g[i * 16 + k]).sum::<f64>())
            .sum();
        let rg = p.restrict(&g);
        let rhs: f64 = p
            .radii
            .iter()
            .zip(&rg)
            .zip(&f)
            .map(|((r, rv), fv)| r.powi(3) * (0..16).map(|j| w[j] * rv[j] * fv[j]).sum::<f64>())
            .sum();
        assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ball_constant_converges_in_one_step() {
        let ball = DomainSpec::ball(3).unwrap();
        let cfg = SolverConfig::new(3.0);
        let r = solve_subcritical(&ball, &cfg, &default_init(&ball).unwrap()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        let omega = 4.0 * PI / 3.0;
        let want = 4.0 * PI * omega.powf(1.0 / 3.0) / (4.0 * PI).powf(0.75);
        assert!((r.quotient / want - 1.0).abs() < 1e-12);
        assert!((ball_constant_quotient(3, 3.0).unwrap() / want - 1.0).abs() < 1e-15);
        let e2 = sharp_constant_ball(5).unwrap();
        assert!((ball_constant_quotient(5, critical_exponent(5)).unwrap() / e2 - 1.0).abs() < 1e-14);
        assert!((r.quotient - 3.035_046_405).abs() < 1e-8);
        assert!((r.boundary_norm - 1.0).abs() < 1e-12);
        assert!(r.quotient <= r.holder_bound.unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn random_start_on_the_ball_reaches_the_constant() {
        let ball = DomainSpec::ball(3).unwrap();
        let cfg = SolverConfig { grid: small_grid(), ..SolverConfig::new(3.0) };
        let basis = Arc::new(ZonalBasis::new(3, 16).unwrap());
        let init = BoundaryFunction::zonal(ZonalProfile::random_positive(ball, basis, 42).unwrap());
        let r = solve_subcritical(&ball, &cfg, &init).unwrap();
        assert!(r.converged, "residual {}", r.residual);
        assert!(r.quotient_history.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
        let v = &r.profile[0].values;
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!(v.iter().all(|x| (x / mean - 1.0).abs() < 1e-6));
        assert!(r.quotient <= r.holder_bound.unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn annulus_iteration_is_monotone_and_stays_radial() {
        let d = DomainSpec::annulus(3, 0.2).unwrap();
        let cfg = SolverConfig { grid: small_grid(), ..SolverConfig::new(4.0) };
        let r = solve_subcritical(&d, &cfg, &default_init(&d).unwrap()).unwrap();
        assert!(r.converged);
        assert!(r.quotient_history.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
        for p in &r.profile {
            let first = p.values[0];
            assert!(p.values.iter().all(|v| (v - first).abs() <= 1e-12 * first));
        }
        assert!((r.boundary_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn el_step_examples() {
        let d = DomainSpec::annulus(3, 0.1).unwrap();
        let f = BoundaryFunction::two_level(d, 2.0).unwrap();
        let p = ExtremalProblem::new(&d, 4.0, &BoundaryGrid::default()).unwrap();
        let before = p.quotient(&p.normalize(&p.nodal_values(&f).unwrap()).unwrap());
        let next = el_step(&f, 4.0).unwrap();
        let after = p.quotient(&p.nodal_values(&next).unwrap());
        assert!(after >= before * (1.0 - 1e-12));
        let zero = BoundaryFunction::constant(DomainSpec::ball(3).unwrap(), &[0.0]).unwrap();
        assert!(el_step(&zero, 3.0).is_err());
        let neg = BoundaryFunction::constant(DomainSpec::ball(3).unwrap(), &[-1.0]).unwrap();
        assert!(el_step(&neg, 3.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(6.0).validate(3).is_err());
        assert!(SolverConfig::new(2.0).validate(3).is_err());
        assert!(SolverConfig { damping: 0.0, ..SolverConfig::new(3.0) }.validate(3).is_err());
        assert!(SolverConfig::new(3.9).validate(4).is_ok());
    }

    #[test]
    fn single_point_continuation_is_a_plain_solve() {
        let ball = DomainSpec::ball(3).unwrap();
        let cfg = SolverConfig { grid: small_grid(), ..SolverConfig::new(4.0) };
        let c = continuation_to_critical(&ball, &[4.0], &cfg).unwrap();
        let s = solve_subcritical(&ball, &cfg, &default_init(&ball).unwrap()).unwrap();
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.extrapolated, s.quotient);
        assert!(continuation_to_critical(&ball, &[4.0, 3.0], &cfg).is_err());
    }
}
