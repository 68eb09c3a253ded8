//! Uniform 1-D grids and real-valued sampled fields.
//!
//! Every computation in this crate lives on a [`Mesh1D`]: `n + 1` equally
//! spaced nodes on `[a, b]`.  Radial problems use `[0, R]`, truncated-line
//! problems use `[-L, L]`.  A [`Field`] holds one finite real sample per node.

use crate::error::{CsError, Result};

/// Uniform grid on `[a, b]` with `n` intervals and `n + 1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    a: f64,
    b: f64,
    n: usize,
    spacing: f64,
    nodes: Vec<f64>,
}

impl Mesh1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || b <= a {
            return Err(CsError::MeshEndpoints { a, b });
        }
        if n == 0 {
            return Err(CsError::MeshEmpty);
        }
        let spacing = (b - a) / n as f64;
        let mut nodes: Vec<f64> = (0..=n).map(|i| a + i as f64 * spacing).collect();
        // pin the right endpoint so nodes[n] == b exactly
        nodes[n] = b;
        Ok(Self { a, b, n, spacing, nodes })
    }

    /// Radial grid on `[0, radius]`.
    pub fn radial(radius: f64, n: usize) -> Result<Self> {
        Self::new(0.0, radius, n)
    }

    /// Symmetric line grid on `[-half_width, half_width]`.
    pub fn line(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals (`nodes() - 1` points in between).
    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    pub fn is_radial(&self) -> bool {
        self.a == 0.0
    }

    /// Same endpoints and interval count.
    pub fn same_as(&self, other: &Mesh1D) -> bool {
        self.a == other.a && self.b == other.b && self.n == other.n
    }
}

/// Real samples of a function on a [`Mesh1D`].  All values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    mesh: Mesh1D,
    values: Vec<f64>,
}

impl Field {
    pub fn new(mesh: Mesh1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.intervals() + 1 {
            return Err(CsError::FieldLength {
                expected: mesh.intervals() + 1,
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(CsError::FieldNotFinite { index });
        }
        Ok(Self { mesh, values })
    }

    /// Sample `f` at every node.
    pub fn from_fn(mesh: Mesh1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = mesh.nodes().iter().map(|&r| f(r)).collect();
        Self::new(mesh, values)
    }

    pub fn zeros(mesh: Mesh1D) -> Self {
        let values = vec![0.0; mesh.intervals() + 1];
        Self { mesh, values }
    }

    /// Internal fast path: caller guarantees length and finiteness.
    pub(crate) fn from_values_unchecked(mesh: Mesh1D, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), mesh.intervals() + 1);
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Pointwise map onto the same mesh.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        let values = self.values.iter().map(|&v| f(v)).collect();
        Field::from_values_unchecked(self.mesh.clone(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_nodes_hit_endpoints_with_constant_spacing() {
        let m = Mesh1D::new(-3.0, 5.0, 160).unwrap();
        assert_eq!(m.node(0), -3.0);
        assert_eq!(m.node(160), 5.0);
        let h = m.spacing();
        for w in m.nodes().windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] - w[0] - h).abs() < 1e-12 * h.max(1.0));
        }
    }

    #[test]
    fn mesh_rejects_bad_endpoints_and_empty_grid() {
        assert!(Mesh1D::new(1.0, 1.0, 4).is_err());
        assert!(Mesh1D::new(2.0, 1.0, 4).is_err());
        assert!(Mesh1D::new(0.0, f64::INFINITY, 4).is_err());
        assert!(Mesh1D::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn field_checks_length_and_finiteness() {
        let m = Mesh1D::radial(1.0, 4).unwrap();
        assert!(Field::new(m.clone(), vec![0.0; 4]).is_err());
        assert!(Field::new(m.clone(), vec![0.0, 1.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(Field::new(m, vec![0.0; 5]).is_ok());
    }
}
