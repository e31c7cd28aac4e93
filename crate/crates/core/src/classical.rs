//! Classical dynamics on directed bonds: the Markov map `M = |U|²`, its
//! mixing spectrum, and the back-scatter-free map `M♯` taken at the point
//! `λ = v + i(v − 2)` where `σ_{d,d̂}` vanishes.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::laplacian::{build_laplacian, LaplacianKind};
use crate::linalg::{self, ComplexMatrix};
use crate::scattering::build_u;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Second modulus above this counts as non-mixing.
pub const NON_MIXING_THRESHOLD: f64 = 1.0 - 1e-9;

#[derive(Clone, Debug)]
pub struct ClassicalMap {
    pub matrix: ComplexMatrix,
    pub lambda: Complex64,
    /// Divided by `v − 1` (the `M♯` case).
    pub normalized: bool,
}

impl ClassicalMap {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Largest deviation of any row or column sum from 1.
    pub fn bistochastic_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            let row: f64 = (0..n).map(|j| self.matrix[(i, j)].re).sum();
            let col: f64 = (0..n).map(|j| self.matrix[(j, i)].re).sum();
            worst = worst.max((row - 1.0).abs()).max((col - 1.0).abs());
        }
        worst
    }

    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        Ok(linalg::eig_general(&self.matrix)?.eigenvalues)
    }
}

/// `M_{d',d} = |U_{d',d}(λ)|²` for real λ.
pub fn build_m(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<ClassicalMap> {
    if lambda.im != 0.0 {
        return Err(Error::NonRealLambda(lambda));
    }
    let u = build_u(g, lambda, kind)?;
    Ok(ClassicalMap {
        matrix: u.matrix.map(|z| Complex64::new(z.norm_sqr(), 0.0)),
        lambda,
        normalized: false,
    })
}

fn check_distribution(rho: &[f64], dim: usize) -> Result<()> {
    if rho.len() != dim {
        return Err(Error::InvalidDistribution(format!("length {} for {dim} bonds", rho.len())));
    }
    if let Some(x) = rho.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidDistribution(format!("entry {x} is not a probability")));
    }
    let total: f64 = rho.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

/// Every iterate `ρ_0, …, ρ_n` of `ρ_{k+1} = M ρ_k`.
pub fn evolve_trajectory(map: &ClassicalMap, rho0: &[f64], steps: usize) -> Result<Vec<Vec<f64>>> {
    let n = map.dim();
    check_distribution(rho0, n)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(rho0.to_vec());
    for _ in 0..steps {
        let prev = out.last().unwrap();
        let next: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| map.matrix[(i, j)].re * prev[j]).sum())
            .collect();
        out.push(next);
    }
    Ok(out)
}

pub fn evolve(map: &ClassicalMap, rho0: &[f64], steps: usize) -> Result<Vec<f64>> {
    Ok(evolve_trajectory(map, rho0, steps)?.pop().unwrap())
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub gap: f64,
    pub second_modulus: f64,
    pub non_mixing: bool,
    /// Normalized eigenvector of the eigenvalue closest to 1.
    pub equilibrium: Vec<f64>,
}

pub fn mixing_gap(map: &ClassicalMap) -> Result<MixingReport> {
    let values = map.eigenvalues()?;
    let top = values
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - ONE).norm().total_cmp(&(b.1 - ONE).norm()))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let second_modulus = values
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != top)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    let v = linalg::eigenvector(&map.matrix, values[top])?;
    let total: Complex64 = v.iter().sum();
    let equilibrium = v.iter().map(|z| (z / total).re).collect();
    Ok(MixingReport {
        gap: 1.0 - second_modulus,
        second_modulus,
        non_mixing: second_modulus > NON_MIXING_THRESHOLD,
        equilibrium,
    })
}

fn sharp_valency(g: &Graph) -> Result<usize> {
    let v = g.require_regular()?;
    if v <= 2 {
        return Err(Error::ValencyTooSmall(v));
    }
    Ok(v)
}

/// `λ = v + i(v − 2)`, equivalently `z = v − 1`.
pub fn sharp_point(v: usize) -> Complex64 {
    Complex64::new(v as f64, v as f64 - 2.0)
}

/// `|U|²` at the special point, divided by `v − 1`.
pub fn build_m_sharp(g: &Graph) -> Result<ClassicalMap> {
    let v = sharp_valency(g)?;
    let lambda = sharp_point(v);
    let u = build_u(g, lambda, LaplacianKind::Standard)?;
    let scale = 1.0 / (v as f64 - 1.0);
    Ok(ClassicalMap {
        matrix: u.matrix.map(|z| Complex64::new(z.norm_sqr() * scale, 0.0)),
        lambda,
        normalized: true,
    })
}

/// Max entry difference between `(v − 1) M♯` and the non-backtracking matrix.
pub fn m_sharp_combinatorial_defect(g: &Graph, map: &ClassicalMap) -> Result<f64> {
    let v = sharp_valency(g)?;
    let w = g.directed_bonds().non_backtracking_matrix();
    Ok(map.matrix.scale(Complex64::new(v as f64 - 1.0, 0.0)).sub(&w)?.max_abs())
}

/// The spectrum of `M♯` from the Laplacian spectrum: `±1/(v−1)` each
/// `r − 1` times, and `m^± = ((v−λ_j) ± √((v−λ_j)² − 4(v−1))) / (2(v−1))`.
pub fn m_sharp_spectrum_via_laplacian(g: &Graph) -> Result<Vec<Complex64>> {
    let v = sharp_valency(g)? as f64;
    let r = g.rank()?;
    let spectrum = build_laplacian(g, LaplacianKind::Standard)?.spectrum()?.real_values();
    let q = v - 1.0;
    let mut out = Vec::with_capacity(2 * g.num_edges());
    for _ in 1..r {
        out.push(Complex64::new(1.0 / q, 0.0));
        out.push(Complex64::new(-1.0 / q, 0.0));
    }
    for l in spectrum {
        let b = v - l;
        let root = Complex64::new(b * b - 4.0 * q, 0.0).sqrt();
        out.push((root + b) / (2.0 * q));
        out.push((-root + b) / (2.0 * q));
    }
    linalg::sort_by_modulus(&mut out);
    Ok(out)
}

/// `Z_M(μ) = det(I − μM)`.
pub fn classical_secular_z_m(map: &ClassicalMap, mu: Complex64) -> Result<Complex64> {
    linalg::determinant(&map.matrix.scale(mu).identity_minus()?)
}

/// `(1 − (μ/(v−1))²)^{r−1} det(I(1 + μ²/(v−1)) − μC/(v−1))`.
pub fn connection_rhs(g: &Graph, mu: Complex64) -> Result<Complex64> {
    let v = sharp_valency(g)? as f64;
    let r = g.rank()? as i32;
    let q = v - 1.0;
    let c = g.connectivity_matrix();
    let n = g.num_vertices();
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { ONE + mu * mu / q } else { Complex64::new(0.0, 0.0) };
        diag - mu * c[(i, j)] / q
    });
    Ok((ONE - (mu / q).powu(2)).powi(r - 1) * linalg::determinant(&m)?)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectrumEntry {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

pub fn spectrum_entries(values: &[Complex64]) -> Vec<SpectrumEntry> {
    values
        .iter()
        .map(|z| SpectrumEntry {
            re: z.re,
            im: z.im,
            modulus: z.norm(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const STD: LaplacianKind = LaplacianKind::Standard;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn path_map_is_swap() {
        let m = build_m(&fixtures::path(2), c(0.4, 0.0), STD).unwrap();
        assert!((m.matrix[(0, 1)].re - 1.0).abs() < 1e-15 && m.matrix[(0, 0)].re == 0.0);
        let out = evolve(&m, &[1.0, 0.0], 1).unwrap();
        assert!(out[0] == 0.0 && (out[1] - 1.0).abs() < 1e-15);
        let rep = mixing_gap(&m).unwrap();
        assert!(rep.non_mixing);
        assert!((rep.second_modulus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_real_lambda_rejected() {
        assert!(matches!(build_m(&fixtures::cycle(3), c(1.0, 0.5), STD), Err(Error::NonRealLambda(_))));
    }

    #[test]
    fn bad_distribution_rejected() {
        let m = build_m(&fixtures::cycle(3), c(1.0, 0.0), STD).unwrap();
        assert!(evolve(&m, &[0.5; 6], 1).is_err());
        assert!(evolve(&m, &[1.0, -0.5, 0.5, 0.0, 0.0, 0.0], 1).is_err());
        assert!(evolve(&m, &[1.0], 1).is_err());
    }

    #[test]
    fn triangle_equilibrium() {
        let m = build_m(&fixtures::cycle(3), c(1.0, 0.0), STD).unwrap();
        assert!(m.bistochastic_defect() < 1e-10);
        let rep = mixing_gap(&m).unwrap();
        for x in &rep.equilibrium {
            assert!((x - 1.0 / 6.0).abs() < 1e-9);
        }
        let uniform = vec![1.0 / 6.0; 6];
        let out = evolve(&m, &uniform, 5).unwrap();
        assert!(out.iter().all(|x| (x - 1.0 / 6.0).abs() < 1e-14));
    }

    #[test]
    fn complete_graph_sharp_map() {
        let g = fixtures::complete(4);
        let m = build_m_sharp(&g).unwrap();
        assert_eq!(m_sharp_combinatorial_defect(&g, &m).unwrap(), 0.0);
        for d in 0..12 {
            assert_eq!(m.matrix[(d ^ 1, d)].re, 0.0);
            let halves = (0..12).filter(|&e| (m.matrix[(e, d)].re - 0.5).abs() < 1e-15).count();
            assert_eq!(halves, 2);
        }
        assert!(m.bistochastic_defect() < 1e-12);
        let rep = mixing_gap(&m).unwrap();
        assert!((rep.second_modulus - 0.5f64.sqrt()).abs() < 1e-8);
        let direct = m.eigenvalues().unwrap();
        let formula = m_sharp_spectrum_via_laplacian(&g).unwrap();
        assert!(linalg::multiset_distance(&direct, &formula) < 1e-8);
    }

    #[test]
    fn sharp_requires_valency_three() {
        assert!(matches!(build_m_sharp(&fixtures::cycle(4)), Err(Error::ValencyTooSmall(2))));
        assert!(matches!(build_m_sharp(&fixtures::random_eight()), Err(Error::NotRegular)));
    }

    #[test]
    fn secular_z_m_basics() {
        let m = build_m_sharp(&fixtures::complete(4)).unwrap();
        assert_eq!(classical_secular_z_m(&m, c(0.0, 0.0)).unwrap(), ONE);
        assert!(classical_secular_z_m(&m, ONE).unwrap().norm() < 1e-12);
    }
}
