//! Shared fixtures for the operator benchmarks.

use hlsext_core::solver::{default_init, ExtremalProblem};
use hlsext_core::{BoundaryGrid, DomainSpec, Result};

/// A thin annulus near the critical exponent with its normalized two-level start.
pub fn annulus_problem(n: usize, r: f64, q: f64, nodes: usize) -> Result<(ExtremalProblem, Vec<Vec<f64>>)> {
    let domain = DomainSpec::annulus(n, r)?;
    let grid = BoundaryGrid { nodes_per_sphere: nodes, ..BoundaryGrid::default() };
    let problem = ExtremalProblem::new(&domain, q, &grid)?;
    let start = problem.normalize(&problem.nodal_values(&default_init(&domain)?)?)?;
    Ok((problem, start))
}

/// Points `(s, 0, ..., 0)` spread over `[0, 0.99]`.
pub fn axis_points(n: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|k| {
            let mut x = vec![0.0; n];
            x[0] = 0.99 * k as f64 / (count.max(2) - 1) as f64;
            x
        })
        .collect()
}
