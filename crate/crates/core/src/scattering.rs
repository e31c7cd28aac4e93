//! Vertex scattering matrices, the bond evolution operator `U(λ)`, the
//! secular function `Z_S(λ)` and eigenvector reconstruction.
//!
//! At vertex `i` with scale `s_i` (valency, or weighted valency for the
//! generalized operator) the scattering phase is
//! `e^{iα_i} = (s_i + i(s_i − λ)) / (s_i − i(s_i − λ))` and
//! `σ_{d,d'} = i(δ_{d̂,d'} − (1 + e^{iα_i}) √(w_d w_{d'}) / s_i)` for `d`
//! leaving and `d'` entering `i`.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedBondSpace, Graph};
use crate::laplacian::{vertex_scale, LaplacianKind};
use crate::linalg::{self, ComplexMatrix, Lu};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative pole guard on `|1 ∓ i(1 − λ/s)|`.
pub const POLE_GUARD: f64 = 1e-12;
/// Singular values of `I − U` below this count as null directions.
pub const NULL_THRESHOLD: f64 = 1e-6;

/// `e^{iα}` for a vertex of scale `s`, rejecting both `λ = s(1 ± i)`.
pub fn scattering_phase(vertex: usize, scale: f64, lambda: Complex64) -> Result<Complex64> {
    let x = I * (ONE - lambda / scale);
    if (ONE - x).norm() < POLE_GUARD || (ONE + x).norm() < POLE_GUARD {
        return Err(Error::Pole { vertex, lambda });
    }
    Ok((ONE + x) / (ONE - x))
}

fn phases(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let scales = vertex_scale(g, kind)?;
    let phases = scales
        .iter()
        .enumerate()
        .map(|(i, &s)| scattering_phase(i, s, lambda))
        .collect::<Result<_>>()?;
    Ok((scales, phases))
}

fn bond_weight(space: &DirectedBondSpace, d: usize, kind: LaplacianKind) -> f64 {
    match kind {
        LaplacianKind::Standard => 1.0,
        LaplacianKind::Generalized => space.weight(d),
    }
}

/// `σ_{out, in}` at a vertex with the given scale and phase.
fn sigma_entry(space: &DirectedBondSpace, out: usize, inc: usize, scale: f64, phase: Complex64, kind: LaplacianKind) -> Complex64 {
    let s = (bond_weight(space, out, kind) * bond_weight(space, inc, kind)).sqrt();
    let back = if space.reversal(out) == inc { ONE } else { Complex64::new(0.0, 0.0) };
    I * (back - (ONE + phase) * s / scale)
}

#[derive(Clone, Debug)]
pub struct VertexScatteringMatrix {
    pub vertex: usize,
    pub lambda: Complex64,
    pub phase: Complex64,
    /// Row labels: bonds leaving the vertex.
    pub outgoing: Vec<usize>,
    /// Column labels: bonds entering the vertex.
    pub incoming: Vec<usize>,
    pub entries: ComplexMatrix,
}

pub fn vertex_sigma(g: &Graph, i: usize, lambda: Complex64, kind: LaplacianKind) -> Result<VertexScatteringMatrix> {
    if i >= g.num_vertices() {
        return Err(Error::NoSuchVertex(i));
    }
    let scale = vertex_scale(g, kind)?[i];
    let phase = scattering_phase(i, scale, lambda)?;
    let space = g.directed_bonds();
    let outgoing = space.outgoing(i).to_vec();
    let incoming = space.incoming(i).to_vec();
    let entries = ComplexMatrix::from_fn(outgoing.len(), incoming.len(), |a, b| {
        sigma_entry(&space, outgoing[a], incoming[b], scale, phase, kind)
    });
    Ok(VertexScatteringMatrix {
        vertex: i,
        lambda,
        phase,
        outgoing,
        incoming,
        entries,
    })
}

#[derive(Clone, Debug)]
pub struct EvolutionOperator {
    pub matrix: ComplexMatrix,
    pub lambda: Complex64,
    pub kind: LaplacianKind,
}

impl EvolutionOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matrix.unitarity_defect().expect("U is square")
    }

    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        Ok(linalg::eig_general(&self.matrix)?.eigenvalues)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(linalg::eig_general(&self.matrix)?.spectral_radius())
    }

    pub fn determinant(&self) -> Result<Complex64> {
        linalg::determinant(&self.matrix)
    }

    /// `det(I − U)`.
    pub fn secular_determinant(&self) -> Result<Complex64> {
        linalg::determinant(&self.matrix.identity_minus()?)
    }
}

/// `U_{d',d} = σ^{(t(d))}_{d',d}` in the canonical bond order.
pub fn build_u(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<EvolutionOperator> {
    let (scales, phases) = phases(g, lambda, kind)?;
    let space = g.directed_bonds();
    let n = space.len();
    let mut matrix = ComplexMatrix::zeros(n, n);
    for d in 0..n {
        let t = space.terminus(d);
        for &e in space.successors(d) {
            matrix[(e, d)] = sigma_entry(&space, e, d, scales[t], phases[t], kind);
        }
    }
    Ok(EvolutionOperator { matrix, lambda, kind })
}

/// `det U = (−1)^V Π_j e^{iα_j}`: each vertex block contributes `−e^{iα_j}`.
pub fn det_u_closed(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let (_, phases) = phases(g, lambda, kind)?;
    Ok(phases.iter().map(|&p| -p).product())
}

/// The bare phase product `Π_j e^{iα_j}`; differs from `det U` by `(−1)^V`.
pub fn phase_product(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let (_, phases) = phases(g, lambda, kind)?;
    Ok(phases.iter().product())
}

/// `(det U)^{−1/2}` taken vertex by vertex as `Π_j (−i e^{−iα_j/2})`, with
/// `α_j` the principal argument. This branch makes `Z_S` real on the real
/// axis for every vertex count and sends it to 1 as `λ → +∞`.
pub fn det_u_inverse_sqrt(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let (_, phases) = phases(g, lambda, kind)?;
    Ok(phases
        .iter()
        .map(|p| -I * Complex64::from_polar(1.0 / p.norm().sqrt(), -p.arg() / 2.0))
        .product())
}

/// `Z_S(λ) = 2^{−B} (det U)^{−1/2} det(I − U)`.
pub fn secular_z_s(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let u = build_u(g, lambda, kind)?;
    let det = u.secular_determinant()?;
    let half = det_u_inverse_sqrt(g, lambda, kind)?;
    Ok(det * half * 0.5f64.powi(g.num_edges() as i32))
}

/// `min_k |1 − μ_k(U(λ))|`, the distance of the spectrum of `U` from 1.
pub fn distance_from_one(g: &Graph, lambda: f64, kind: LaplacianKind) -> Result<f64> {
    let u = build_u(g, Complex64::new(lambda, 0.0), kind)?;
    Ok(u.eigenvalues()?.iter().map(|m| (ONE - m).norm()).fold(f64::INFINITY, f64::min))
}

fn null_count(g: &Graph, lambda: f64, kind: LaplacianKind) -> Result<usize> {
    let u = build_u(g, Complex64::new(lambda, 0.0), kind)?;
    Ok(u.eigenvalues()?.iter().filter(|m| (ONE - *m).norm() < NULL_THRESHOLD).count())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SecularZero {
    pub lambda: f64,
    pub multiplicity: usize,
}

/// Real zeros of `Z_S`. Simple and odd-order zeros are bracketed by sign
/// changes and bisected; even-order zeros (no sign change) are found as
/// minima of `min_k |1 − μ_k(U)|` by golden-section search. Multiplicities
/// are the number of eigenvalues of `U` within the null threshold of 1.
pub fn secular_zeros(g: &Graph, kind: LaplacianKind) -> Result<Vec<SecularZero>> {
    let scales = vertex_scale(g, kind)?;
    let top = 2.0 * scales.iter().cloned().fold(0.0, f64::max);
    let (lo, hi) = (-0.25, top + 0.25);
    let steps = 50 * g.num_vertices().max(1);
    let h = (hi - lo) / steps as f64;
    let grid: Vec<f64> = (0..=steps).map(|k| lo + h * k as f64).collect();
    let z = |x: f64| secular_z_s(g, Complex64::new(x, 0.0), kind).map(|c| c.re);
    let zs: Vec<f64> = grid.iter().map(|&x| z(x)).collect::<Result<_>>()?;
    let dist: Vec<f64> = grid.iter().map(|&x| distance_from_one(g, x, kind)).collect::<Result<_>>()?;

    let mut candidates = Vec::new();
    for k in 0..steps {
        if zs[k] == 0.0 {
            candidates.push(grid[k]);
        } else if zs[k] * zs[k + 1] < 0.0 {
            let (mut a, mut b, mut fa) = (grid[k], grid[k + 1], zs[k]);
            while b - a > 1e-13 {
                let m = 0.5 * (a + b);
                let fm = z(m)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fa * fm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            candidates.push(0.5 * (a + b));
        }
    }
    for k in 1..steps {
        if dist[k] <= dist[k - 1] && dist[k] <= dist[k + 1] {
            let x = golden_minimum(|x| distance_from_one(g, x, kind), grid[k - 1], grid[k + 1])?;
            if distance_from_one(g, x, kind)? < NULL_THRESHOLD {
                candidates.push(x);
            }
        }
    }
    candidates.sort_by(f64::total_cmp);
    let mut zeros: Vec<SecularZero> = Vec::new();
    for x in candidates {
        // bisection roots are kept over golden-section ones when both exist
        if let Some(last) = zeros.last() {
            if (x - last.lambda).abs() < 1e-6 {
                continue;
            }
        }
        zeros.push(SecularZero {
            lambda: x,
            multiplicity: null_count(g, x, kind)?.max(1),
        });
    }
    Ok(zeros)
}

/// Zeros repeated according to multiplicity, ascending.
pub fn secular_zeros_expanded(g: &Graph, kind: LaplacianKind) -> Result<Vec<f64>> {
    Ok(secular_zeros(g, kind)?
        .into_iter()
        .flat_map(|z| std::iter::repeat_n(z.lambda, z.multiplicity))
        .collect())
}

fn golden_minimum(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Orthonormal basis of the null space of `I − U(λ)` from the small
/// eigenvalues of `(I − U)†(I − U)`, sharpened by inverse iteration.
pub fn stationary_bond_vectors(g: &Graph, lambda: f64, kind: LaplacianKind) -> Result<Vec<Vec<Complex64>>> {
    let u = build_u(g, Complex64::new(lambda, 0.0), kind)?;
    let a = u.matrix.identity_minus()?;
    let gram = a.adjoint().matmul(&a)?;
    let (values, vectors) = linalg::eig_hermitian(&gram)?;
    let smallest = values.first().copied().unwrap_or(f64::INFINITY).max(0.0).sqrt();
    let count = values.iter().filter(|&&s| s.max(0.0).sqrt() < NULL_THRESHOLD).count();
    if count == 0 {
        return Err(Error::NoNullDirection(smallest));
    }
    let mut shifted = a.clone();
    for i in 0..shifted.rows() {
        shifted[(i, i)] += Complex64::new(1e-13, 0.0);
    }
    let lu = Lu::new(&shifted)?;
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(count);
    for k in 0..count {
        let mut x = vectors.column(k);
        x = lu.solve(&x)?;
        linalg::normalize(&mut x);
        if orthogonalize(&mut x, &basis) {
            basis.push(x);
        }
    }
    Ok(basis)
}

/// Gram–Schmidt against `basis`; returns false if nothing independent is left.
fn orthogonalize(x: &mut [Complex64], basis: &[Vec<Complex64>]) -> bool {
    for _ in 0..2 {
        for b in basis {
            let proj: Complex64 = b.iter().zip(x.iter()).map(|(bi, xi)| bi.conj() * xi).sum();
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= proj * bi;
            }
        }
    }
    let n = linalg::norm2(x);
    if n < 1e-8 {
        return false;
    }
    linalg::normalize(x);
    true
}

/// Vertex values from a stationary bond vector:
/// `ψ_i = (1/s_i) Σ_{bonds at i} √w (a_out e^{iπ/4} + a_in e^{−iπ/4})`.
pub fn vertex_values(g: &Graph, bond_vector: &[Complex64], kind: LaplacianKind) -> Result<Vec<Complex64>> {
    let space = g.directed_bonds();
    if bond_vector.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            got: bond_vector.len(),
        });
    }
    let scales = vertex_scale(g, kind)?;
    let out_phase = Complex64::from_polar(1.0, FRAC_PI_4);
    let in_phase = out_phase.conj();
    Ok((0..g.num_vertices())
        .map(|i| {
            let sum: Complex64 = space
                .outgoing(i)
                .iter()
                .map(|&d| {
                    let w = bond_weight(&space, d, kind).sqrt();
                    (bond_vector[d] * out_phase + bond_vector[space.reversal(d)] * in_phase) * w
                })
                .sum();
            sum / scales[i]
        })
        .collect())
}

/// Laplacian eigenvectors at `λ` rebuilt from the stationary bond vectors of
/// `U(λ)`, one orthonormal vertex vector per null direction.
pub fn reconstruct_eigenvector(g: &Graph, lambda: f64, kind: LaplacianKind) -> Result<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for a in stationary_bond_vectors(g, lambda, kind)? {
        let mut psi = vertex_values(g, &a, kind)?;
        if orthogonalize(&mut psi, &out) {
            out.push(psi);
        }
    }
    if out.is_empty() {
        return Err(Error::NoNullDirection(0.0));
    }
    Ok(out)
}
