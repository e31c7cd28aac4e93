//! Discrete Laplacian `L = D − C` and its weighted form `L̃ = D̃ − C̃`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexDegrees};
use crate::linalg::{self, ComplexMatrix, SpectralResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianKind {
    #[default]
    Standard,
    /// Edge weights enter both the adjacency and the diagonal.
    Generalized,
}

impl LaplacianKind {
    /// Generalized for weighted graphs, standard otherwise.
    pub fn natural_for(g: &Graph) -> Self {
        if g.is_weighted() {
            Self::Generalized
        } else {
            Self::Standard
        }
    }
}

/// Per-vertex diagonal of the operator: `v_i` or `u_i`.
pub fn vertex_scale(g: &Graph, kind: LaplacianKind) -> Result<Vec<f64>> {
    let degrees = g.degrees();
    match kind {
        LaplacianKind::Standard => Ok(degrees.valency.iter().map(|&v| v as f64).collect()),
        LaplacianKind::Generalized if g.is_weighted() => Ok(degrees.weighted_valency),
        LaplacianKind::Generalized => Err(Error::MissingWeights),
    }
}

#[derive(Clone, Debug)]
pub struct LaplacianOperator {
    pub matrix: ComplexMatrix,
    pub kind: LaplacianKind,
    pub degrees: VertexDegrees,
}

impl LaplacianOperator {
    pub fn new(g: &Graph, kind: LaplacianKind) -> Result<Self> {
        let diag = vertex_scale(g, kind)?;
        let adjacency = match kind {
            LaplacianKind::Standard => g.connectivity_matrix(),
            LaplacianKind::Generalized => g.weighted_connectivity_matrix(),
        };
        let mut matrix = adjacency.scale(Complex64::new(-1.0, 0.0));
        for (i, &d) in diag.iter().enumerate() {
            matrix[(i, i)] = Complex64::new(d, 0.0);
        }
        Ok(Self {
            matrix,
            kind,
            degrees: g.degrees(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Ascending eigenvalues with eigenvectors.
    pub fn spectrum(&self) -> Result<SpectralResult> {
        linalg::eig_symmetric(&self.matrix)
    }

    /// `det(λI − L)`.
    pub fn char_poly_value(&self, lambda: Complex64) -> Result<Complex64> {
        let n = self.dim();
        let mut m = self.matrix.scale(Complex64::new(-1.0, 0.0));
        for i in 0..n {
            m[(i, i)] += lambda;
        }
        linalg::determinant(&m)
    }

    /// Tolerance below which the smallest eigenvalue counts as zero.
    pub fn zero_tolerance(&self) -> f64 {
        1e-10 * self.matrix.max_abs().max(1.0)
    }

    /// Number of eigenvalues within the zero tolerance.
    pub fn zero_multiplicity(&self) -> Result<usize> {
        let tol = self.zero_tolerance();
        Ok(self.spectrum()?.eigenvalues.iter().filter(|z| z.re.abs() < tol).count())
    }
}

pub fn build_laplacian(g: &Graph, kind: LaplacianKind) -> Result<LaplacianOperator> {
    LaplacianOperator::new(g, kind)
}
