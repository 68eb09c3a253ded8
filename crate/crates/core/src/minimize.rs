//! Descent minimization of the planar energy on Dirichlet balls, and the
//! translated-profile upper bound it is measured against.
//!
//! The objective is the discrete quadrature from [`crate::energy`], with the
//! boundary value pinned to zero at `r = R` and the exact
//! differentiate-the-quadrature gradient, so accepted steps decrease the
//! reported energy by construction.  The descent direction is the gradient
//! preconditioned by the nodal control volumes (`2 pi r h` inside, `pi h^2/4`
//! at the origin), which makes it a pointwise approximation of the
//! Euler-Lagrange residual: the stopping tolerance and the residual norm live
//! on the same scale, and the step size is mesh-independent.
//!
//! No claim of global optimality is made anywhere: results are local
//! minimizers or descent upper bounds for the infimum.

use crate::energy::{energy_and_gradient_values, energy_i, energy_values, CsParams, EnergyBreakdown};
use crate::error::{CsError, Result};
use crate::grid::{Field, Mesh1D};
use crate::limit::{degenerate_k0, solve_eq_k, soliton_wk, SolitonParams};
use crate::quadrature::Kahan;
use std::f64::consts::PI;

/// Starting iterate for the descent.
#[derive(Debug, Clone)]
pub enum InitProfile {
    /// Small centered bump (amplitude 0.1, unit width): probes the trivial
    /// basin around zero.
    ZeroPlusBump,
    /// Outer soliton translated to radius `rho`: probes the escape basin.
    /// The scale is the outer root of the root equation when it exists, the
    /// degenerate scale otherwise.
    TranslatedSoliton { rho: f64 },
    /// Caller-supplied profile on the run's own mesh.
    Custom(Field),
}

/// Ball radius, resolution, and stopping rules for one descent run.
#[derive(Debug, Clone)]
pub struct MinimizeConfig {
    pub radius: f64,
    pub n: usize,
    pub max_iters: usize,
    /// Stop when the preconditioned gradient max-norm falls below this.
    pub grad_tol: f64,
    pub step_init: f64,
    pub init: InitProfile,
}

/// Spacing guard: coarser grids under-resolve the profiles at desk scale.
pub const MAX_SPACING: f64 = 0.05;

impl MinimizeConfig {
    fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(CsError::BadConfig { reason: reason.to_string() });
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return bad("radius must be finite and positive");
        }
        if self.n == 0 {
            return bad("grid needs at least one interval");
        }
        if self.radius / self.n as f64 > MAX_SPACING * (1.0 + 1e-12) {
            return bad("spacing exceeds 0.05; increase n");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if !(self.grad_tol.is_finite() && self.grad_tol > 0.0) {
            return bad("grad_tol must be finite and positive");
        }
        if !(self.step_init.is_finite() && self.step_init > 0.0) {
            return bad("step_init must be finite and positive");
        }
        match &self.init {
            InitProfile::TranslatedSoliton { rho } => {
                if !(rho.is_finite() && *rho > 0.0 && *rho < self.radius) {
                    return bad("translated-soliton center must satisfy 0 < rho < radius");
                }
            }
            InitProfile::Custom(field) => {
                if !field.mesh().is_radial()
                    || field.mesh().intervals() != self.n
                    || (field.mesh().b() - self.radius).abs() > 1e-9 * self.radius
                {
                    return bad("custom initial profile must live on the run's own mesh");
                }
            }
            InitProfile::ZeroPlusBump => {}
        }
        Ok(())
    }
}

/// Outcome of one descent run.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    /// Final iterate; the boundary value is exactly zero.
    pub u: Field,
    pub energy: EnergyBreakdown,
    pub iters: usize,
    /// Preconditioned gradient max-norm at the final iterate.
    pub grad_norm: f64,
    /// First moment of the measure `u^2 2 pi r dr`, a smooth proxy for where
    /// the mass sits.
    pub centroid_xi: f64,
    /// Squared planar L2 norm `int u^2 2 pi r dr`.
    pub l2_mass: f64,
    pub converged: bool,
    /// Energy at the initial iterate and after every accepted step.
    pub energy_trace: Vec<f64>,
}

fn initial_values(mesh: &Mesh1D, params: &CsParams, init: &InitProfile) -> Vec<f64> {
    match init {
        InitProfile::ZeroPlusBump => mesh.nodes().iter().map(|&r| 0.1 * (-r * r).exp()).collect(),
        InitProfile::TranslatedSoliton { rho } => {
            let report = solve_eq_k(params);
            let k = report
                .k2
                .or(report.k1)
                .filter(|&k| k > 0.0)
                .unwrap_or_else(|| degenerate_k0(params.p()).expect("p validated"));
            let sp = SolitonParams::new(params.p(), k).expect("validated");
            mesh.nodes().iter().map(|&r| soliton_wk(&sp, r - rho)).collect()
        }
        InitProfile::Custom(field) => field.values().to_vec(),
    }
}

/// Nodal control volumes of the radial grid (boundary node excluded: it is
/// pinned by the Dirichlet condition).
fn control_volumes(mesh: &Mesh1D) -> Vec<f64> {
    let n = mesh.intervals();
    let h = mesh.spacing();
    let mut v = vec![0.0; n + 1];
    // pi h^2 rather than the literal half-cell volume pi h^2/4: the larger
    // scale keeps the origin row of the preconditioned Hessian inside the
    // interior spectral radius, so the step cap covers every node
    v[0] = PI * h * h;
    for (i, vi) in v.iter_mut().enumerate().take(n).skip(1) {
        *vi = std::f64::consts::TAU * h * mesh.node(i);
    }
    v[n] = f64::INFINITY; // pinned node: direction is always zero
    v
}

const ARMIJO_SLOPE: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// Stability cap for the preconditioned explicit step.  The preconditioned
/// Hessian's spectral edge is ~4/h^2 (interior second differences); without
/// the cap, Armijo rides the stability boundary, where the stiffest modes
/// oscillate instead of decaying (their energy is below the descent
/// tolerance), and a standing odd-even ripple survives.
fn step_cap(spacing: f64) -> f64 {
    0.4 * spacing * spacing
}

/// Gradient descent with Armijo backtracking on the discrete energy over
/// radial profiles vanishing at `r = radius`.
pub fn minimize_on_ball(params: &CsParams, config: &MinimizeConfig) -> Result<MinimizeResult> {
    config.validate()?;
    let mesh = Mesh1D::radial(config.radius, config.n)?;
    let n = config.n;
    let mut vals = initial_values(&mesh, params, &config.init);
    vals[n] = 0.0;

    let volumes = control_volumes(&mesh);
    let mut grad = Vec::new();
    let mut energy = energy_and_gradient_values(&mesh, &vals, params, &mut grad);
    if !energy.total.is_finite() {
        return Err(CsError::Diverged { trace: vec![] });
    }
    let mut trace = vec![energy.total];
    let cap = step_cap(mesh.spacing());
    let mut step = config.step_init.min(cap);
    let mut iters = 0usize;
    let mut converged = false;
    let mut grad_norm;
    let mut trial = vec![0.0; n + 1];

    loop {
        if !grad.iter().all(|g| g.is_finite()) {
            return Err(CsError::Diverged { trace });
        }
        grad_norm = (0..n).map(|j| (grad[j] / volumes[j]).abs()).fold(0.0f64, f64::max);
        if grad_norm <= config.grad_tol {
            converged = true;
            break;
        }
        if iters >= config.max_iters {
            break;
        }

        // directional slope of the preconditioned step
        let mut slope = Kahan::new();
        for j in 0..n {
            slope.add(grad[j] * grad[j] / volumes[j]);
        }
        let slope = slope.value();

        let mut accepted = false;
        for _ in 0..MAX_BACKTRACKS {
            for j in 0..n {
                trial[j] = vals[j] - step * grad[j] / volumes[j];
            }
            trial[n] = 0.0;
            let e_trial = energy_values(&mesh, &trial, params);
            if e_trial.total.is_finite() && e_trial.total <= energy.total - ARMIJO_SLOPE * step * slope
            {
                std::mem::swap(&mut vals, &mut trial);
                energy = e_trial;
                accepted = true;
                break;
            }
            step *= 0.5;
            if step < 1e-300 {
                break;
            }
        }
        if !accepted {
            break; // stalled at rounding level
        }
        iters += 1;
        trace.push(energy.total);
        energy = energy_and_gradient_values(&mesh, &vals, params, &mut grad);
        step = (step * 1.3).min(cap);
    }

    let (l2_mass, centroid_xi) = mass_and_centroid(&mesh, &vals);
    let u = Field::from_values_unchecked(mesh, vals);
    Ok(MinimizeResult {
        energy,
        iters,
        grad_norm,
        centroid_xi,
        l2_mass,
        converged,
        energy_trace: trace,
        u,
    })
}

fn mass_and_centroid(mesh: &Mesh1D, vals: &[f64]) -> (f64, f64) {
    let n = mesh.intervals();
    let h = mesh.spacing();
    let mut num = Kahan::new();
    let mut den = Kahan::new();
    for (i, &v) in vals.iter().enumerate() {
        let w = if i == 0 || i == n { 0.5 * h } else { h };
        let r = mesh.node(i);
        let u2r = v * v * r;
        den.add(w * u2r);
        num.add(w * u2r * r);
    }
    let den = den.value();
    let l2 = std::f64::consts::TAU * den;
    let centroid = if den == 0.0 { 0.0 } else { num.value() / den };
    (l2, centroid)
}

/// Linear interpolation of a line field, zero outside its mesh.
fn interp(u: &Field, x: f64) -> f64 {
    let mesh = u.mesh();
    if x < mesh.a() || x > mesh.b() {
        return 0.0;
    }
    let t = (x - mesh.a()) / mesh.spacing();
    let i = (t.floor() as usize).min(mesh.intervals() - 1);
    let frac = t - i as f64;
    let v = u.values();
    v[i] * (1.0 - frac) + v[i + 1] * frac
}

/// Planar energy of a line profile recentered at radius `rho`:
/// `U_rho(r) = U(r - rho)` embedded as a radial field on `[0, rho + L]`
/// (clipped below `r = 0`, where `U` must already be negligible).
///
/// For even exponentially decaying `U` this behaves like
/// `2 pi rho J(U) - C + o(1)` with a positive constant `C` as `rho` grows.
pub fn translated_profile_energy(
    u_line: &Field,
    rho: f64,
    params: &CsParams,
) -> Result<EnergyBreakdown> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(CsError::BadConfig { reason: "rho must be finite and positive".to_string() });
    }
    let tail = interp(u_line, -rho).abs();
    const CLIP_LIMIT: f64 = 1e-12;
    if tail > CLIP_LIMIT {
        return Err(CsError::TranslationTooSmall { tail, limit: CLIP_LIMIT });
    }
    let h = u_line.mesh().spacing();
    let radius = rho + u_line.mesh().b();
    let n = (radius / h).round().max(1.0) as usize;
    let mesh = Mesh1D::radial(radius, n)?;
    let embedded = Field::from_fn(mesh, |r| interp(u_line, r - rho))?;
    energy_i(&embedded, params)
}

/// One row of the escape report.
#[derive(Debug, Clone, Copy)]
pub struct EscapeRow {
    pub radius: f64,
    pub energy: f64,
    pub l2_mass: f64,
    pub centroid_xi: f64,
    /// Centroid per unit of squared L2 mass.
    pub centroid_per_mass: f64,
}

/// Trends of a family of ball minimizations over increasing radii.
#[derive(Debug, Clone)]
pub struct EscapeReport {
    pub rows: Vec<EscapeRow>,
    /// Least-squares slope of energy against radius.
    pub energy_slope: f64,
    /// Least-squares slope of the centroid against radius.
    pub centroid_slope: f64,
}

/// Summarize minimization results over increasing radii: per-radius energy,
/// mass, centroid, and the fitted linear trends.
pub fn escape_diagnostics(results: &[MinimizeResult]) -> Result<EscapeReport> {
    if results.len() < 3 {
        return Err(CsError::TooFewRadii { got: results.len() });
    }
    let rows: Vec<EscapeRow> = results
        .iter()
        .map(|r| {
            let radius = r.u.mesh().b();
            EscapeRow {
                radius,
                energy: r.energy.total,
                l2_mass: r.l2_mass,
                centroid_xi: r.centroid_xi,
                centroid_per_mass: if r.l2_mass == 0.0 { 0.0 } else { r.centroid_xi / r.l2_mass },
            }
        })
        .collect();
    if rows.windows(2).any(|w| w[1].radius <= w[0].radius) {
        return Err(CsError::RadiiNotIncreasing);
    }
    let energy_slope = least_squares_slope(rows.iter().map(|r| (r.radius, r.energy)));
    let centroid_slope = least_squares_slope(rows.iter().map(|r| (r.radius, r.centroid_xi)));
    Ok(EscapeReport { rows, energy_slope, centroid_slope })
}

fn least_squares_slope(points: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let n = points.clone().count() as f64;
    let mean_x = points.clone().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.clone().map(|(_, y)| y).sum::<f64>() / n;
    let sxy: f64 = points.clone().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = points.map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit::omega1;

    #[test]
    fn config_validation_catches_bad_inputs() {
        let base = MinimizeConfig {
            radius: 10.0,
            n: 200,
            max_iters: 10,
            grad_tol: 1e-6,
            step_init: 1e-3,
            init: InitProfile::ZeroPlusBump,
        };
        let params = CsParams::new(2.0, 0.5).unwrap();
        assert!(minimize_on_ball(&params, &base).is_ok());

        let coarse = MinimizeConfig { n: 100, ..base.clone() };
        assert!(minimize_on_ball(&params, &coarse).is_err());
        let bad_rho =
            MinimizeConfig { init: InitProfile::TranslatedSoliton { rho: 20.0 }, ..base.clone() };
        assert!(minimize_on_ball(&params, &bad_rho).is_err());
        let bad_tol = MinimizeConfig { grad_tol: 0.0, ..base };
        assert!(minimize_on_ball(&params, &bad_tol).is_err());
    }

    #[test]
    fn descent_is_monotone_and_keeps_the_boundary_pinned() {
        let params = CsParams::new(2.0, 0.5).unwrap();
        let config = MinimizeConfig {
            radius: 40.0,
            n: 800,
            max_iters: 2000,
            grad_tol: 1e-7,
            step_init: 1e-3,
            init: InitProfile::ZeroPlusBump,
        };
        let res = minimize_on_ball(&params, &config).unwrap();
        assert_eq!(*res.u.values().last().unwrap(), 0.0);
        for w in res.energy_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
        assert!(res.energy.total <= res.energy_trace[0]);
        if res.converged {
            assert!(res.grad_norm <= config.grad_tol);
        }
    }

    #[test]
    fn collapse_in_the_nonexistence_regime() {
        // omega = 0.5 > 1/3: only the trivial state remains
        let params = CsParams::new(2.0, 0.5).unwrap();
        let config = MinimizeConfig {
            radius: 30.0,
            n: 600,
            max_iters: 60_000,
            grad_tol: 1e-7,
            step_init: 1e-3,
            init: InitProfile::ZeroPlusBump,
        };
        let res = minimize_on_ball(&params, &config).unwrap();
        assert!(res.converged, "iters = {}", res.iters);
        assert!(res.energy.total >= -1e-8, "total = {:.3e}", res.energy.total);
        let max_u = res.u.values().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        assert!(max_u <= 1e-3, "max_u = {max_u:.3e}");
    }

    #[test]
    fn translated_profile_energy_examples() {
        let params = CsParams::new(2.0, 0.1).unwrap();
        let mesh = Mesh1D::line(30.0, 1200).unwrap();
        let zero = Field::zeros(mesh.clone());
        let e = translated_profile_energy(&zero, 100.0, &params).unwrap();
        assert_eq!(e.total, 0.0);

        // a profile that is too wide for the translation is rejected
        let wide = Field::from_fn(mesh, |r| (-0.001 * r * r).exp()).unwrap();
        assert!(matches!(
            translated_profile_energy(&wide, 10.0, &params),
            Err(CsError::TranslationTooSmall { .. })
        ));
    }

    #[test]
    fn escape_diagnostics_needs_three_increasing_radii() {
        let params = CsParams::new(2.0, 2.0 * omega1(2.0).unwrap()).unwrap();
        let config = MinimizeConfig {
            radius: 10.0,
            n: 200,
            max_iters: 5,
            grad_tol: 1e-9,
            step_init: 1e-3,
            init: InitProfile::ZeroPlusBump,
        };
        let r1 = minimize_on_ball(&params, &config).unwrap();
        let r2 = minimize_on_ball(&params, &config).unwrap();
        assert!(matches!(
            escape_diagnostics(&[r1.clone(), r2.clone()]),
            Err(CsError::TooFewRadii { got: 2 })
        ));
        assert!(matches!(
            escape_diagnostics(&[r1.clone(), r2.clone(), r1.clone()]),
            Err(CsError::RadiiNotIncreasing)
        ));
    }
}
