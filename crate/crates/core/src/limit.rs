//! The 1-D limit problem: explicit solitons, the reduced energy, and the
//! frequency thresholds.
//!
//! Translating a fixed profile to radius `rho -> infinity` turns the planar
//! energy into `2 pi rho` times the line functional
//!
//! ```text
//! J(u) = 1/2 int (|u'|^2 + omega u^2) dr + 1/24 (int u^2 dr)^3
//!      - 1/(p+1) int |u|^{p+1} dr,
//! ```
//!
//! whose critical points are translates of the explicit solitons
//! `w_k(r) = k^{1/(p-1)} w_1(sqrt(k) r)` with
//! `w_1(r) = ((2/(p+1)) cosh^2((p-1) r / 2))^{1/(1-p)}`, for `k > 0` solving
//! the scalar root equation `k = omega + (m^2/4) k^{(5-p)/(p-1)}`.  Here
//! `m = int w_1^2 dr` is the only constant that is not in closed form; it is
//! computed once per exponent by quadrature (for `p = 2` it equals 6).
//!
//! Everything downstream is explicit: the energy along the soliton curve
//! `psi(k) = J(w_k)`, the tangency frequency `omega1` above which the root
//! equation has no solution, and the boundedness threshold `omega0` at which
//! `psi(k2)` changes sign.

use crate::energy::{nonexistence_threshold, validate_p, CsParams, EnergyBreakdown};
use crate::error::{CsError, Result};
use crate::grid::{Field, Mesh1D};
use crate::quadrature::{derivative, integrate_line, Kahan};
use crate::scalar::{bisect_root, grow_bracket_up};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Exponent and scale of one soliton `w_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    p: f64,
    k: f64,
}

impl SolitonParams {
    pub fn new(p: f64, k: f64) -> Result<Self> {
        validate_p(p)?;
        if !k.is_finite() || k <= 0.0 {
            return Err(CsError::InvalidK { k });
        }
        Ok(Self { p, k })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

fn w1_unchecked(p: f64, r: f64) -> f64 {
    // log-space evaluation: ln w1 = ln((p+1)/2)/(p-1) - 2/(p-1) ln cosh(x)
    // with ln cosh(x) = |x| + ln(1 + e^{-2|x|}) - ln 2, stable for all x.
    let x = 0.5 * (p - 1.0) * r;
    let ax = x.abs();
    let ln_cosh = ax + (-2.0 * ax).exp().ln_1p() - std::f64::consts::LN_2;
    (((p + 1.0) / 2.0).ln() / (p - 1.0) - 2.0 / (p - 1.0) * ln_cosh).exp()
}

fn w1_prime_unchecked(p: f64, r: f64) -> f64 {
    -w1_unchecked(p, r) * (0.5 * (p - 1.0) * r).tanh()
}

/// Unit-scale soliton `w_1`: positive, even, strictly decreasing in `|r|`.
pub fn soliton_w1(p: f64, r: f64) -> Result<f64> {
    validate_p(p)?;
    Ok(w1_unchecked(p, r))
}

/// Derivative of the unit-scale soliton, `w_1' = -w_1 tanh((p-1) r / 2)`.
pub fn soliton_w1_prime(p: f64, r: f64) -> Result<f64> {
    validate_p(p)?;
    Ok(w1_prime_unchecked(p, r))
}

/// Soliton at scale `k`: `w_k(r) = k^{1/(p-1)} w_1(sqrt(k) r)`.
pub fn soliton_wk(sp: &SolitonParams, r: f64) -> f64 {
    sp.k.powf(1.0 / (sp.p - 1.0)) * w1_unchecked(sp.p, sp.k.sqrt() * r)
}

/// Derivative of the scaled soliton.
pub fn soliton_wk_prime(sp: &SolitonParams, r: f64) -> f64 {
    sp.k.powf(1.0 / (sp.p - 1.0)) * sp.k.sqrt() * w1_prime_unchecked(sp.p, sp.k.sqrt() * r)
}

// Quadrature setup for the mass constant: w_1^2 decays like e^{-2|r|}, so
// [-80/(p-1), 80/(p-1)] truncates below 1e-60 and 2e5 intervals put the
// trapezoid rule at rounding level.
const MASS_HALF_WIDTH_FACTOR: f64 = 80.0;
const MASS_INTERVALS: usize = 200_000;

fn mass_quadrature(p: f64) -> f64 {
    let half_width = MASS_HALF_WIDTH_FACTOR / (p - 1.0);
    let h = 2.0 * half_width / MASS_INTERVALS as f64;
    let mut acc = Kahan::new();
    for i in 0..=MASS_INTERVALS {
        let r = -half_width + i as f64 * h;
        let w = w1_unchecked(p, r);
        let weight = if i == 0 || i == MASS_INTERVALS { 0.5 } else { 1.0 };
        acc.add(weight * w * w);
    }
    acc.value() * h
}

fn mass_cache() -> &'static Mutex<HashMap<u64, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn mass_of(p: f64) -> f64 {
    let key = p.to_bits();
    if let Some(&m) = mass_cache().lock().unwrap().get(&key) {
        return m;
    }
    let m = mass_quadrature(p);
    mass_cache().lock().unwrap().insert(key, m);
    m
}

/// Mass constant `m = int w_1^2 dr` (quadrature; cached per exponent).
pub fn soliton_mass(p: f64) -> Result<f64> {
    validate_p(p)?;
    Ok(mass_of(p))
}

/// Max-norm over the mesh nodes of the conserved Hamiltonian density
/// `-w'^2/2 + k w^2/2 - w^{p+1}/(p+1)`, which vanishes identically on the
/// soliton; evaluated from the closed-form profile and derivative, so the
/// result is rounding noise, not a discretization error.
pub fn hamiltonian_residual(sp: &SolitonParams, mesh: &Mesh1D) -> f64 {
    let k = sp.k();
    let p = sp.p();
    mesh.nodes()
        .iter()
        .map(|&r| {
            let w = soliton_wk(sp, r);
            let wp = soliton_wk_prime(sp, r);
            (-0.5 * wp * wp + 0.5 * k * w * w - w.powf(p + 1.0) / (p + 1.0)).abs()
        })
        .fold(0.0f64, f64::max)
}

/// Quadrature values of `(int |w_1'|^2 dr, int w_1^{p+1} dr)`.
///
/// The matching closed forms are `((p-1) m / (p+3), 2 (p+1) m / (p+3))`; see
/// [`soliton_relations_closed_form`].
pub fn soliton_relations(p: f64) -> Result<(f64, f64)> {
    validate_p(p)?;
    let half_width = MASS_HALF_WIDTH_FACTOR / (p - 1.0);
    let h = 2.0 * half_width / MASS_INTERVALS as f64;
    let mut kin = Kahan::new();
    let mut pot = Kahan::new();
    for i in 0..=MASS_INTERVALS {
        let r = -half_width + i as f64 * h;
        let w = w1_unchecked(p, r);
        let wp = w1_prime_unchecked(p, r);
        let weight = if i == 0 || i == MASS_INTERVALS { 0.5 } else { 1.0 };
        kin.add(weight * wp * wp);
        pot.add(weight * w.powf(p + 1.0));
    }
    Ok((kin.value() * h, pot.value() * h))
}

/// Closed-form predictions for [`soliton_relations`].
pub fn soliton_relations_closed_form(p: f64) -> Result<(f64, f64)> {
    let m = soliton_mass(p)?;
    Ok(((p - 1.0) / (p + 3.0) * m, 2.0 * (p + 1.0) / (p + 3.0) * m))
}

/// Line energy of a profile on a truncated-line mesh.
pub fn energy_j(u: &Field, params: &CsParams) -> Result<EnergyBreakdown> {
    let du = derivative(u)?;
    let kinetic = 0.5 * integrate_line(&du.map(|v| v * v));
    let l2 = integrate_line(&u.map(|v| v * v));
    let mass = 0.5 * params.omega() * l2;
    let nonlocal = l2 * l2 * l2 / 24.0;
    let p = params.p();
    let potential = -integrate_line(&u.map(|v| v.abs().powf(p + 1.0))) / (p + 1.0);
    Ok(EnergyBreakdown::new(kinetic, mass, nonlocal, potential))
}

/// Euler-Lagrange residual of the line functional on interior nodes
/// (endpoints zero): `-u'' + omega u + (1/4)(int u^2)^2 u - |u|^{p-1} u`.
pub fn limit_el_residual(u: &Field, params: &CsParams) -> Result<Field> {
    let mesh = u.mesh();
    let n = mesh.intervals();
    if n < 2 {
        return Err(CsError::TooFewIntervals { n });
    }
    let l2 = integrate_line(&u.map(|v| v * v));
    let coeff = params.omega() + 0.25 * l2 * l2;
    let p = params.p();
    let h = mesh.spacing();
    let v = u.values();
    let mut out = vec![0.0; n + 1];
    for i in 1..n {
        let upp = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        out[i] = -upp + coeff * v[i] - v[i].abs().powf(p - 1.0) * v[i];
    }
    Ok(Field::from_values_unchecked(mesh.clone(), out))
}

/// Line energy along the soliton curve, in closed form:
///
/// ```text
/// psi(k) = m [ (p-5)/(2(3+p)) k^{(3+p)/(2(p-1))}
///            + (omega/2)     k^{(5-p)/(2(p-1))}
///            + (m^2/24)      k^{3(5-p)/(2(p-1))} ].
/// ```
pub fn psi_curve(k: f64, params: &CsParams) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(CsError::KNotPositive { k });
    }
    let p = params.p();
    let m = mass_of(p);
    let lk = k.ln();
    let e1 = (3.0 + p) / (2.0 * (p - 1.0));
    let e2 = (5.0 - p) / (2.0 * (p - 1.0));
    let e3 = 3.0 * e2;
    Ok(m * ((p - 5.0) / (2.0 * (3.0 + p)) * (e1 * lk).exp()
        + 0.5 * params.omega() * (e2 * lk).exp()
        + m * m / 24.0 * (e3 * lk).exp()))
}

/// Roots of the scalar equation `k = omega + (m^2/4) k^{(5-p)/(p-1)}`.
///
/// Two roots `0 < k1 < k2` below `omega1`, the degenerate root `k0` at
/// `omega1` (matched to absolute tolerance 1e-12), none above.  At
/// `omega = 0` exactly, the lower root collapses onto the excluded point
/// `k = 0` and is reported as `k1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootReport {
    pub count: usize,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
}

/// Scale at which the root equation degenerates:
/// `k0 = ((5-p) m^2 / (4(p-1)))^{-(p-1)/(2(3-p))}` (independent of omega).
pub fn degenerate_k0(p: f64) -> Result<f64> {
    let m = soliton_mass(p)?;
    let a = (5.0 - p) * m * m / (4.0 * (p - 1.0));
    Ok(a.powf(-(p - 1.0) / (2.0 * (3.0 - p))))
}

/// Tangency frequency: above it the root equation has no solution and the
/// line problem has no nontrivial critical point.
pub fn omega1(p: f64) -> Result<f64> {
    let m = soliton_mass(p)?;
    let a = (5.0 - p) * m * m / (4.0 * (p - 1.0));
    Ok(a.powf(-(p - 1.0) / (2.0 * (3.0 - p)))
        - m * m / 4.0 * a.powf(-(5.0 - p) / (2.0 * (3.0 - p))))
}

/// Boundedness threshold: the frequency at which the soliton-curve energy
/// `psi(k2)` changes sign,
///
/// ```text
/// omega0 = (3-p)/(3+p) 3^{(p-1)/(2(3-p))} 2^{2/(3-p)}
///          (m^2 (3+p)/(p-1))^{-(p-1)/(2(3-p))}.
/// ```
pub fn omega0(p: f64) -> Result<f64> {
    let m = soliton_mass(p)?;
    let e = (p - 1.0) / (2.0 * (3.0 - p));
    Ok((3.0 - p) / (3.0 + p)
        * 3.0f64.powf(e)
        * 2.0f64.powf(2.0 / (3.0 - p))
        * (m * m * (3.0 + p) / (p - 1.0)).powf(-e))
}

/// Classify the root structure at the given parameters.
pub fn solve_eq_k(params: &CsParams) -> RootReport {
    let p = params.p();
    let omega = params.omega();
    let m = mass_of(p);
    let q = (5.0 - p) / (p - 1.0);
    let g = |k: f64| omega + 0.25 * m * m * k.powf(q) - k;
    let k0 = degenerate_k0(p).expect("p validated by CsParams");
    let w1t = omega1(p).expect("p validated by CsParams");

    if (omega - w1t).abs() <= 1e-12 {
        return RootReport { count: 1, k1: Some(k0), k2: None };
    }
    if omega > w1t {
        return RootReport { count: 0, k1: None, k2: None };
    }

    let k1 = if omega == 0.0 {
        0.0
    } else {
        let lo = (0.5 * omega).min(1e-14);
        bisect_root(g, lo, k0, 0.0).expect("g(lo) > 0 > g(k0)")
    };
    let (_, hi) = grow_bracket_up(g, k0, 2.0).expect("g -> +infinity");
    let k2 = bisect_root(g, k0, hi, 0.0).expect("bracketed");
    RootReport { count: 2, k1: Some(k1), k2: Some(k2) }
}

/// The per-exponent constants in one bundle, ordering-checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub p: f64,
    pub m: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub omega_bar: f64,
}

/// Bundle `m`, `omega0`, `omega1`, `omega_bar` and check their ordering.
pub fn thresholds(p: f64) -> Result<Thresholds> {
    let m = soliton_mass(p)?;
    let w0 = omega0(p)?;
    let w1 = omega1(p)?;
    let wbar = nonexistence_threshold(p)?;
    if !(w0 > 0.0 && w0 < w1 && w1 < wbar) {
        return Err(CsError::ThresholdOrdering { p });
    }
    Ok(Thresholds { p, m, omega0: w0, omega1: w1, omega_bar: wbar })
}
