//! Numerics for the radial stationary Chern-Simons-Schrodinger energy
//! functional: trapezoid calculus on uniform grids, the planar gauged energy
//! and its Euler-Lagrange residual, the explicit 1-D limit problem with its
//! soliton family and frequency thresholds, and descent minimization on
//! Dirichlet balls.
//!
//! All operations are pure functions of their inputs and safe to call
//! concurrently; the only shared state is a per-exponent cache of the soliton
//! mass constant.

pub mod energy;
pub mod error;
pub mod grid;
pub mod limit;
pub mod minimize;
pub mod quadrature;
pub mod scalar;

pub use energy::{
    a0_tail, cs_inequality_gap, el_residual, energy_i, energy_i_gradient, gauge_h,
    nonexistence_threshold, pointwise_profile, CsParams, EnergyBreakdown, PointwiseProfile,
};
pub use error::{CsError, Result};
pub use grid::{Field, Mesh1D};
pub use limit::{
    degenerate_k0, energy_j, hamiltonian_residual, limit_el_residual, omega0, omega1, psi_curve,
    solve_eq_k, soliton_mass, soliton_relations, soliton_relations_closed_form, soliton_w1,
    soliton_w1_prime, soliton_wk, soliton_wk_prime, thresholds, RootReport, SolitonParams,
    Thresholds,
};
pub use minimize::{
    escape_diagnostics, minimize_on_ball, translated_profile_energy, EscapeReport, EscapeRow,
    InitProfile, MinimizeConfig, MinimizeResult,
};
pub use quadrature::{
    derivative, integrate_line, integrate_radial, prefix_integral, suffix_integral, PrefixWeight,
    SuffixWeight,
};
