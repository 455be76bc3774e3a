//! Riesz and harmonic extension operators on balls, annuli and half-space
//! windows, the variational quotients built from them, and a nonlinear power
//! iteration for their subcritical maximizers.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod zonal;
pub mod closed_forms;
pub mod extension;
pub mod functionals;
pub mod solver;

pub use error::{Error, Result};
pub use extension::{
    extend_riesz, extension_field, harmonic_extend, harmonic_field, lp_norm_boundary, lq_norm_interior,
    lq_norm_interior_with, restrict_riesz, BoundaryFunction, InteriorField, NormValue, Representation,
    VolumeOptions,
};
pub use functionals::{
    c2_functional, c2_functional_with, isoperimetric_conformal, optimize_two_level, poisson_quotient,
    poisson_quotient_with, rayleigh_j2, rayleigh_j2_with, PoissonReport, QuotientReport, TwoLevelObjective,
    TwoLevelOptimum, Verdict,
};
pub use geometry::{Component, DomainSpec};
pub use solver::{
    ball_constant_quotient, continuation_to_critical, el_step, solve_subcritical, BoundaryGrid, ContinuationReport, SolverConfig,
    SolverReport,
};
pub use zonal::{ZonalBasis, ZonalProfile};
