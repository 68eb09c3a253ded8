//! Composite trapezoid quadrature, running integrals, and difference stencils.
//!
//! All rules are second order on smooth integrands and exact on piecewise
//! linear data.  Sums are compensated (Neumaier) so that long grids do not
//! lose digits to accumulation; on grids that resolve an exponentially
//! decaying integrand the trapezoid rule is limited by rounding, not by h^2.

use crate::error::{CsError, Result};
use crate::grid::Field;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Trapezoid approximation of the line integral of `f` over `[a, b]`.
pub fn integrate_line(f: &Field) -> f64 {
    let v = f.values();
    let n = f.mesh().intervals();
    let mut acc = Kahan::new();
    acc.add(0.5 * v[0]);
    for &x in &v[1..n] {
        acc.add(x);
    }
    acc.add(0.5 * v[n]);
    acc.value() * f.mesh().spacing()
}

/// Planar radial integral `2 pi * int_0^b f(r) r dr` by trapezoid.
///
/// The mesh must start at `r = 0`.
pub fn integrate_radial(f: &Field) -> Result<f64> {
    let mesh = f.mesh();
    if !mesh.is_radial() {
        return Err(CsError::NotRadial { a: mesh.a() });
    }
    let v = f.values();
    let r = mesh.nodes();
    let n = mesh.intervals();
    let mut acc = Kahan::new();
    acc.add(0.5 * v[0] * r[0]);
    for i in 1..n {
        acc.add(v[i] * r[i]);
    }
    acc.add(0.5 * v[n] * r[n]);
    Ok(std::f64::consts::TAU * acc.value() * mesh.spacing())
}

/// Weight applied to the integrand of [`prefix_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixWeight {
    /// Integrate `f(s)` as is.
    Plain,
    /// Integrate `s * f(s)`.
    TimesR,
}

/// Weight applied to the integrand of [`suffix_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuffixWeight {
    /// Integrate `f(s)` as is.
    Plain,
    /// Integrate `f(s) / s`.  At a node with `s = 0` the integrand is set to
    /// zero (removable-singularity rule; callers must only use this weight on
    /// data vanishing superlinearly at the origin).
    InverseR,
}

/// Running integral `g(r_i) = int_a^{r_i} f(s) w(s) ds`, with `g(a) = 0`.
pub fn prefix_integral(f: &Field, weight: PrefixWeight) -> Field {
    let mesh = f.mesh();
    let n = mesh.intervals();
    let h = mesh.spacing();
    let phi = weighted_integrand_prefix(f, weight);
    let mut out = vec![0.0; n + 1];
    let mut acc = Kahan::new();
    for i in 0..n {
        acc.add(0.5 * h * (phi[i] + phi[i + 1]));
        out[i + 1] = acc.value();
    }
    Field::from_values_unchecked(mesh.clone(), out)
}

/// Tail integral `g(r_i) = int_{r_i}^b f(s) w(s) ds`, with `g(b) = 0`.
pub fn suffix_integral(f: &Field, weight: SuffixWeight) -> Field {
    let mesh = f.mesh();
    let n = mesh.intervals();
    let h = mesh.spacing();
    let phi = weighted_integrand_suffix(f, weight);
    let mut out = vec![0.0; n + 1];
    let mut acc = Kahan::new();
    for i in (0..n).rev() {
        acc.add(0.5 * h * (phi[i] + phi[i + 1]));
        out[i] = acc.value();
    }
    Field::from_values_unchecked(mesh.clone(), out)
}

fn weighted_integrand_prefix(f: &Field, weight: PrefixWeight) -> Vec<f64> {
    let r = f.mesh().nodes();
    match weight {
        PrefixWeight::Plain => f.values().to_vec(),
        PrefixWeight::TimesR => f.values().iter().zip(r).map(|(&v, &s)| v * s).collect(),
    }
}

fn weighted_integrand_suffix(f: &Field, weight: SuffixWeight) -> Vec<f64> {
    let r = f.mesh().nodes();
    match weight {
        SuffixWeight::Plain => f.values().to_vec(),
        SuffixWeight::InverseR => f
            .values()
            .iter()
            .zip(r)
            .map(|(&v, &s)| if s == 0.0 { 0.0 } else { v / s })
            .collect(),
    }
}

/// Second-order derivative stencil: central differences at interior nodes,
/// one-sided three-point stencils at the endpoints.  Exact on quadratics at
/// interior nodes.
pub fn derivative(f: &Field) -> Result<Field> {
    let mesh = f.mesh();
    let n = mesh.intervals();
    if n < 2 {
        return Err(CsError::TooFewIntervals { n });
    }
    let v = f.values();
    let h = mesh.spacing();
    let mut out = vec![0.0; n + 1];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for i in 1..n {
        out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    out[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    Ok(Field::from_values_unchecked(mesh.clone(), out))
}
