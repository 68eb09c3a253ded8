//! The planar radial gauged energy and its Euler-Lagrange structure.
//!
//! For a radial profile `u` on `[0, R]` with frequency `omega` and power
//! `p`, the energy is
//!
//! ```text
//! I(u) = 1/2 int (|u'|^2 + omega u^2) dx
//!      + 1/8 int u^2/r^2 ( int_0^r s u^2 ds )^2 dx
//!      - 1/(p+1) int |u|^{p+1} dx,          dx = 2 pi r dr,
//! ```
//!
//! with the cumulative gauge field `h(r) = 1/2 int_0^r s u^2 ds` driving both
//! nonlocal terms.  Critical points solve
//!
//! ```text
//! -u'' - u'/r + ( omega + h^2/r^2 + int_r^R (h/s) u^2 ds ) u = |u|^{p-1} u.
//! ```
//!
//! Discretization: nodal trapezoid quadrature for all zero-derivative terms
//! and midpoint-rule cell quadrature for the kinetic term (both second
//! order).  The discrete gradient returned by [`energy_i_gradient`] is the
//! exact derivative of that quadrature, so descent on it is monotone by
//! construction; consistency with the continuum residual is a test, not an
//! assumption.  Every integrand carrying a 1/r or 1/r^2 factor takes its
//! analytic limit at the origin node (zero in all cases, since h = O(r^2)).

use crate::error::{CsError, Result};
use crate::grid::{Field, Mesh1D};
use crate::quadrature::{prefix_integral, suffix_integral, Kahan, PrefixWeight, SuffixWeight};
use crate::scalar::{bisect_root, golden_section_min, grow_bracket_up};
use std::f64::consts::{PI, TAU};

/// Lower edge of the supported exponent band: `p` must exceed `1 + P_MARGIN`.
pub const P_MARGIN: f64 = 1e-3;

/// Accept exponents only inside `(1 + P_MARGIN, 3 - P_MARGIN)`; the scaling
/// exponents such as `(5-p)/(p-1)` and `2/(3-p)` leave double precision near
/// the endpoints.
pub fn validate_p(p: f64) -> Result<()> {
    let lo = 1.0 + P_MARGIN;
    let hi = 3.0 - P_MARGIN;
    if !(p.is_finite() && p > lo && p < hi) {
        return Err(CsError::POutOfBand { p, lo, hi });
    }
    Ok(())
}

/// Problem parameters: power nonlinearity exponent `p` and frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsParams {
    p: f64,
    omega: f64,
}

impl CsParams {
    pub fn new(p: f64, omega: f64) -> Result<Self> {
        validate_p(p)?;
        if !omega.is_finite() || omega < 0.0 {
            return Err(CsError::InvalidOmega { omega });
        }
        Ok(Self { p, omega })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Additive terms of an energy value; `total` is always their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub mass: f64,
    pub nonlocal: f64,
    pub potential: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(kinetic: f64, mass: f64, nonlocal: f64, potential: f64) -> Self {
        Self {
            kinetic,
            mass,
            nonlocal,
            potential,
            total: kinetic + mass + nonlocal + potential,
        }
    }
}

/// Cumulative gauge field `h(r) = 1/2 int_0^r s u^2(s) ds`.
pub fn gauge_h(u: &Field) -> Result<Field> {
    if !u.mesh().is_radial() {
        return Err(CsError::NotRadial { a: u.mesh().a() });
    }
    let usq = u.map(|v| v * v);
    Ok(prefix_integral(&usq, PrefixWeight::TimesR).map(|v| 0.5 * v))
}

/// Gauge-potential tail `int_r^R (h(s)/s) u^2(s) ds`.
///
/// `h` must be the gauge field of `u` on the same mesh; the integrand at
/// `s = 0` is zero (h = O(s^2) there).
pub fn a0_tail(u: &Field, h: &Field) -> Result<Field> {
    if !u.mesh().same_as(h.mesh()) {
        return Err(CsError::MeshMismatch);
    }
    if !u.mesh().is_radial() {
        return Err(CsError::NotRadial { a: u.mesh().a() });
    }
    let hu2 = Field::from_values_unchecked(
        u.mesh().clone(),
        u.values()
            .iter()
            .zip(h.values())
            .map(|(&uv, &hv)| hv * uv * uv)
            .collect(),
    );
    Ok(suffix_integral(&hu2, SuffixWeight::InverseR))
}

/// Discrete quadrature of the energy; shared by the public entry points and
/// the descent loop (which works on raw nodal values).
pub(crate) fn energy_values(mesh: &Mesh1D, vals: &[f64], params: &CsParams) -> EnergyBreakdown {
    energy_values_impl(mesh, vals, params, None)
}

/// Energy together with the exact gradient of the discrete quadrature with
/// respect to every nodal value.
pub(crate) fn energy_and_gradient_values(
    mesh: &Mesh1D,
    vals: &[f64],
    params: &CsParams,
    grad: &mut Vec<f64>,
) -> EnergyBreakdown {
    grad.clear();
    grad.resize(vals.len(), 0.0);
    energy_values_impl(mesh, vals, params, Some(grad))
}

fn energy_values_impl(
    mesh: &Mesh1D,
    vals: &[f64],
    params: &CsParams,
    grad: Option<&mut Vec<f64>>,
) -> EnergyBreakdown {
    let n = mesh.intervals();
    let h = mesh.spacing();
    let r = mesh.nodes();
    let p = params.p();
    let omega = params.omega();

    // inner integral S(r_i) = int_0^{r_i} s u^2 ds  (= 2 h(r_i))
    let mut s = vec![0.0; n + 1];
    let mut acc = Kahan::new();
    for i in 0..n {
        acc.add(0.5 * h * (r[i] * vals[i] * vals[i] + r[i + 1] * vals[i + 1] * vals[i + 1]));
        s[i + 1] = acc.value();
    }

    // nodal trapezoid weights h * {1/2, 1, ..., 1, 1/2}
    let tw = |i: usize| if i == 0 || i == n { 0.5 * h } else { h };

    let mut kin = Kahan::new();
    for i in 0..n {
        let d = (vals[i + 1] - vals[i]) / h;
        let rmid = 0.5 * (r[i] + r[i + 1]);
        kin.add(h * d * d * rmid);
    }
    let kinetic = PI * kin.value();

    let mut mass = Kahan::new();
    let mut nl = Kahan::new();
    let mut pot = Kahan::new();
    for i in 0..=n {
        let w = tw(i);
        let u2r = vals[i] * vals[i] * r[i];
        mass.add(w * u2r);
        pot.add(w * vals[i].abs().powf(p + 1.0) * r[i]);
        if i > 0 {
            nl.add(w * vals[i] * vals[i] * s[i] * s[i] / r[i]);
        }
    }
    let mass_term = PI * omega * mass.value();
    let nonlocal = 0.25 * PI * nl.value();
    let potential = -TAU / (p + 1.0) * pot.value();

    if let Some(grad) = grad {
        // adjoint of the inner prefix integral: (W^T a)_j with
        // a_i = tw_i u_i^2 S_i / r_i
        let mut wta = vec![0.0; n + 1];
        let mut csuf = Kahan::new();
        for j in (0..=n).rev() {
            let a_j = if j == 0 {
                0.0
            } else {
                tw(j) * vals[j] * vals[j] * s[j] / r[j]
            };
            wta[j] = if j == 0 {
                0.5 * h * csuf.value()
            } else {
                h * (0.5 * a_j + csuf.value())
            };
            csuf.add(a_j);
        }
        for j in 0..=n {
            let mut g = 0.0;
            if j >= 1 {
                let d = (vals[j] - vals[j - 1]) / h;
                g += TAU * d * 0.5 * (r[j - 1] + r[j]);
            }
            if j < n {
                let d = (vals[j + 1] - vals[j]) / h;
                g -= TAU * d * 0.5 * (r[j] + r[j + 1]);
            }
            let w = tw(j);
            g += TAU * omega * w * r[j] * vals[j];
            g -= TAU * w * r[j] * vals[j].abs().powf(p - 1.0) * vals[j];
            if j >= 1 {
                g += 0.5 * PI * w * vals[j] * s[j] * s[j] / r[j];
            }
            g += PI * r[j] * vals[j] * wta[j];
            grad[j] = g;
        }
    }

    EnergyBreakdown::new(kinetic, mass_term, nonlocal, potential)
}

/// Energy of a radial profile.
pub fn energy_i(u: &Field, params: &CsParams) -> Result<EnergyBreakdown> {
    if !u.mesh().is_radial() {
        return Err(CsError::NotRadial { a: u.mesh().a() });
    }
    Ok(energy_values(u.mesh(), u.values(), params))
}

/// Exact gradient of the discrete energy with respect to the nodal values.
pub fn energy_i_gradient(u: &Field, params: &CsParams) -> Result<Vec<f64>> {
    if !u.mesh().is_radial() {
        return Err(CsError::NotRadial { a: u.mesh().a() });
    }
    let mut grad = Vec::new();
    energy_and_gradient_values(u.mesh(), u.values(), params, &mut grad);
    Ok(grad)
}

/// Pointwise Euler-Lagrange residual on interior nodes (endpoints are set to
/// zero; the boundary rows belong to the boundary conditions, not the
/// equation).  Vanishes to second order in the spacing exactly when `u`
/// solves the stationary equation on the mesh.
pub fn el_residual(u: &Field, params: &CsParams) -> Result<Field> {
    let mesh = u.mesh();
    if !mesh.is_radial() {
        return Err(CsError::NotRadial { a: mesh.a() });
    }
    let n = mesh.intervals();
    if n < 2 {
        return Err(CsError::TooFewIntervals { n });
    }
    let hfield = gauge_h(u)?;
    let tail = a0_tail(u, &hfield)?;
    let v = u.values();
    let hv = hfield.values();
    let tv = tail.values();
    let r = mesh.nodes();
    let h = mesh.spacing();
    let p = params.p();
    let omega = params.omega();

    let mut out = vec![0.0; n + 1];
    for i in 1..n {
        let upp = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        let up = (v[i + 1] - v[i - 1]) / (2.0 * h);
        let coeff = omega + (hv[i] / r[i]) * (hv[i] / r[i]) + tv[i];
        out[i] = -upp - up / r[i] + coeff * v[i] - v[i].abs().powf(p - 1.0) * v[i];
    }
    Ok(Field::from_values_unchecked(mesh.clone(), out))
}

/// Slack in the interpolation-type inequality
/// `int u^4 dx <= 2 (int |grad u|^2 dx)^{1/2} (nonlocal core)^{1/2}`:
/// returns RHS - LHS, which is nonnegative up to quadrature error for every
/// radial profile.
pub fn cs_inequality_gap(u: &Field) -> Result<f64> {
    let mesh = u.mesh();
    if !mesh.is_radial() {
        return Err(CsError::NotRadial { a: mesh.a() });
    }
    let n = mesh.intervals();
    let h = mesh.spacing();
    let r = mesh.nodes();
    let v = u.values();

    let mut s = vec![0.0; n + 1];
    let mut acc = Kahan::new();
    for i in 0..n {
        acc.add(0.5 * h * (r[i] * v[i] * v[i] + r[i + 1] * v[i + 1] * v[i + 1]));
        s[i + 1] = acc.value();
    }

    let mut kin = Kahan::new();
    for i in 0..n {
        let d = (v[i + 1] - v[i]) / h;
        kin.add(h * d * d * 0.5 * (r[i] + r[i + 1]));
    }
    let grad_sq = TAU * kin.value();

    let tw = |i: usize| if i == 0 || i == n { 0.5 * h } else { h };
    let mut core = Kahan::new();
    let mut l4 = Kahan::new();
    for i in 0..=n {
        let w = tw(i);
        l4.add(w * v[i].powi(4) * r[i]);
        if i > 0 {
            core.add(w * v[i] * v[i] * s[i] * s[i] / r[i]);
        }
    }
    let nonlocal_core = TAU * core.value();
    let quartic = TAU * l4.value();

    Ok(2.0 * (grad_sq * nonlocal_core).sqrt() - quartic)
}

/// Negative window of the coercivity profile
/// `f(t) = (omega/4) t^2 + (1/8) t^4 - t^{p+1}/(p+1)`.
///
/// When `exists_negative` is false the profile is nonnegative on `t > 0` and
/// the remaining fields are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseProfile {
    pub exists_negative: bool,
    /// Left zero of the profile (0 if the window reaches the origin, which
    /// happens only at `omega = 0` or below double-precision resolution).
    pub alpha: f64,
    /// Right zero of the profile.
    pub beta: f64,
    /// Depth `-min f > 0` of the negative well.
    pub c0: f64,
}

/// Locate the negative window and depth of the coercivity profile.
pub fn pointwise_profile(params: &CsParams) -> PointwiseProfile {
    let p = params.p();
    let omega = params.omega();
    let f = |t: f64| 0.25 * omega * t * t + 0.125 * t.powi(4) - t.powf(p + 1.0) / (p + 1.0);
    // phi = f / t^2 has the same positive zeros and sign
    let phi = |t: f64| 0.25 * omega + 0.125 * t * t - t.powf(p - 1.0) / (p + 1.0);
    let t_min = (4.0 * (p - 1.0) / (p + 1.0)).powf(1.0 / (3.0 - p));
    if phi(t_min) >= 0.0 {
        return PointwiseProfile {
            exists_negative: false,
            alpha: 0.0,
            beta: 0.0,
            c0: 0.0,
        };
    }

    // left zero: walk down from the minimizer until phi turns positive
    let mut lo = t_min;
    let mut alpha = 0.0;
    for _ in 0..2000 {
        lo *= 0.5;
        if lo < 1e-300 {
            break;
        }
        if phi(lo) > 0.0 {
            alpha = bisect_root(phi, lo, t_min, 1e-14).expect("sign change by construction");
            break;
        }
    }

    let (_, hi) = grow_bracket_up(phi, t_min, 2.0).expect("phi grows like t^2");
    let beta = bisect_root(phi, t_min, hi, 1e-14).expect("bracketed");

    // interior minimum: f'(t)/t = omega/2 + t^2/2 - t^{p-1}
    let chi = |t: f64| 0.5 * omega + 0.5 * t * t - t.powf(p - 1.0);
    let lo_chi = alpha.max(1e-300);
    let t_star = if chi(lo_chi) < 0.0 && chi(beta) > 0.0 {
        bisect_root(chi, lo_chi, beta, 1e-14).expect("bracketed")
    } else {
        golden_section_min(f, lo_chi, beta, 1e-12).0
    };
    PointwiseProfile {
        exists_negative: true,
        alpha,
        beta,
        c0: -f(t_star),
    }
}

/// Smallest frequency above which `omega t^2 + (3/4) t^4 - t^{p+1}` is
/// nonnegative for all `t`, i.e. `max_{t>0} (t^{p-1} - (3/4) t^2)`, from the
/// closed-form stationary point `t* = (2(p-1)/3)^{1/(3-p)}`.
pub fn nonexistence_threshold(p: f64) -> Result<f64> {
    validate_p(p)?;
    let t_star = (2.0 * (p - 1.0) / 3.0).powf(1.0 / (3.0 - p));
    let value = t_star.powf(p - 1.0) - 0.75 * t_star * t_star;
    debug_assert!({
        // coarse grid cross-check of the stationary-point maximum
        let mut best = f64::NEG_INFINITY;
        for i in 1..=4000 {
            let t = t_star * 2.0 * i as f64 / 4000.0;
            best = best.max(t.powf(p - 1.0) - 0.75 * t * t);
        }
        (best - value).abs() <= 1e-6 * value.abs().max(1.0)
    });
    Ok(value)
}
