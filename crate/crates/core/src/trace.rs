//! Smoothed spectral density and its periodic-orbit expansion.
//!
//! The density `d_ε(λ) = (1/π) Σ_j ε/((λ − λ_j)² + ε²)` is compared with a
//! smooth Lorentzian (Weyl) part plus the oscillating orbit sum
//! `−(1/π) Im ∂_λ Σ_{r ≤ R} Σ_{n_p ≤ N} a_p(λ − iε)^r / r`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::laplacian::{build_laplacian, vertex_scale, LaplacianKind, LaplacianOperator};
use crate::orbits::{OrbitCatalog, SignatureTable};
use crate::scattering::build_u;

/// Central-difference step for λ-derivatives.
pub const DIFF_STEP: f64 = 1e-5;
pub const MIN_EPSILON: f64 = 1e-3;
pub const DEFAULT_EPSILON: f64 = 0.3;

pub fn check_epsilon(eps: f64) -> Result<()> {
    if eps.is_finite() && eps >= MIN_EPSILON {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("smoothing width must be at least {MIN_EPSILON}, got {eps}")))
    }
}

/// `steps + 1` equally spaced points from `min` to `max`.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min < max) || steps == 0 {
        return Err(Error::InvalidArgument(format!("bad grid {min}:{max}:{steps}")));
    }
    Ok((0..=steps).map(|k| min + (max - min) * k as f64 / steps as f64).collect())
}

/// Lorentzian-smoothed density of the computed spectrum.
pub fn smoothed_density_exact(op: &LaplacianOperator, grid: &[f64], eps: f64) -> Result<Vec<f64>> {
    check_epsilon(eps)?;
    let spectrum = op.spectrum()?.real_values();
    Ok(grid
        .iter()
        .map(|&x| spectrum.iter().map(|&l| eps / ((x - l).powi(2) + eps * eps)).sum::<f64>() / PI)
        .collect())
}

/// `(1/π) Im Σ_j 1/(λ − s_j(1 + i))` at `λ − iε`: Lorentzians centred at
/// `s_j` with half-width `s_j + ε`. At `ε = 0` this is
/// `(1/π) Σ_j (1/s_j) / (1 + (1 − λ/s_j)²)`; for `ε > 0` it is the smooth
/// part that pairs with the orbit sum taken at the same shifted point.
pub fn weyl_term(g: &Graph, grid: &[f64], eps: f64, kind: LaplacianKind) -> Result<Vec<f64>> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("smoothing width must be non-negative, got {eps}")));
    }
    let scales = vertex_scale(g, kind)?;
    Ok(grid
        .iter()
        .map(|&x| {
            scales
                .iter()
                .map(|&s| (s + eps) / ((x - s).powi(2) + (s + eps).powi(2)))
                .sum::<f64>()
                / PI
        })
        .collect())
}

fn orbit_sum(g: &Graph, table: &SignatureTable, lambda: Complex64, max_rep: usize) -> Result<Complex64> {
    let u = build_u(g, lambda, table.kind)?;
    let values = table.class_values(&u.matrix);
    let mut total = Complex64::new(0.0, 0.0);
    for group in &table.groups {
        let a = group.amplitude(&values);
        let mut power = a;
        let mut s = power;
        for r in 2..=max_rep {
            power *= a;
            s += power / r as f64;
        }
        total += s * group.count as f64;
    }
    Ok(total)
}

fn orbit_term_with(g: &Graph, table: &SignatureTable, grid: &[f64], eps: f64, max_rep: usize) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&x| {
            let plus = orbit_sum(g, table, Complex64::new(x + DIFF_STEP, -eps), max_rep)?;
            let minus = orbit_sum(g, table, Complex64::new(x - DIFF_STEP, -eps), max_rep)?;
            Ok(-((plus - minus) / (2.0 * DIFF_STEP)).im / PI)
        })
        .collect()
}

/// Orbit part of the trace formula with length cutoff `n` and repetition
/// cutoff `max_rep`.
pub fn orbit_term(
    catalog: &OrbitCatalog,
    g: &Graph,
    grid: &[f64],
    eps: f64,
    n: usize,
    max_rep: usize,
    kind: LaplacianKind,
) -> Result<Vec<f64>> {
    check_epsilon(eps)?;
    catalog.require_full()?;
    let table = catalog.signatures(g, kind, n)?;
    orbit_term_with(g, &table, grid, eps, max_rep)
}

/// `det(λI − L) / Π_j |s_j − i(s_j − λ)|`; on the real axis this is `Z_S`.
pub fn secular_closed_form(op: &LaplacianOperator, scales: &[f64], lambda: Complex64) -> Result<Complex64> {
    let norm: f64 = scales
        .iter()
        .map(|&s| (Complex64::new(s, 0.0) - Complex64::i() * (s - lambda)).norm())
        .product();
    Ok(op.char_poly_value(lambda)? / norm)
}

/// `(1/π) Im ∂_λ log Z_S(λ − iε)` by central differences on the closed form.
pub fn reference_density(op: &LaplacianOperator, scales: &[f64], grid: &[f64], eps: f64) -> Result<Vec<f64>> {
    check_epsilon(eps)?;
    grid.iter()
        .map(|&x| {
            let plus = secular_closed_form(op, scales, Complex64::new(x + DIFF_STEP, -eps))?;
            let minus = secular_closed_form(op, scales, Complex64::new(x - DIFF_STEP, -eps))?;
            Ok((plus / minus).ln().im / (2.0 * DIFF_STEP) / PI)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityEvaluation {
    pub lambda_grid: Vec<f64>,
    pub epsilon: f64,
    pub exact_density: Vec<f64>,
    pub weyl_term: Vec<f64>,
    pub orbit_term: Vec<f64>,
    /// `|exact − (weyl + orbit)|` per point.
    pub residual: Vec<f64>,
    pub reference_density: Vec<f64>,
    /// `(N, R)`.
    pub orbit_cutoffs: (usize, usize),
    pub max_residual: f64,
    pub peak_density: f64,
    /// `max |exact − reference|`.
    pub reference_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensitySummary {
    pub epsilon: f64,
    pub max_length: usize,
    pub max_repetition: usize,
    pub grid_points: usize,
    pub max_residual: f64,
    pub peak_density: f64,
    pub reference_deviation: f64,
}

impl DensityEvaluation {
    pub fn summary(&self) -> DensitySummary {
        DensitySummary {
            epsilon: self.epsilon,
            max_length: self.orbit_cutoffs.0,
            max_repetition: self.orbit_cutoffs.1,
            grid_points: self.lambda_grid.len(),
            max_residual: self.max_residual,
            peak_density: self.peak_density,
            reference_deviation: self.reference_deviation,
        }
    }

    /// Columns `lambda,exact,weyl,orbit,residual`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "lambda,exact,weyl,orbit,residual")?;
        for k in 0..self.lambda_grid.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.lambda_grid[k], self.exact_density[k], self.weyl_term[k], self.orbit_term[k], self.residual[k]
            )?;
        }
        Ok(())
    }
}

/// All three curves, the residual and the closed-form reference.
pub fn trace_formula_report(
    catalog: &OrbitCatalog,
    g: &Graph,
    grid: &[f64],
    eps: f64,
    n: usize,
    max_rep: usize,
    kind: LaplacianKind,
) -> Result<DensityEvaluation> {
    let op = build_laplacian(g, kind)?;
    let scales = vertex_scale(g, kind)?;
    let exact = smoothed_density_exact(&op, grid, eps)?;
    let weyl = weyl_term(g, grid, eps, kind)?;
    let orbit = orbit_term(catalog, g, grid, eps, n, max_rep, kind)?;
    let reference = reference_density(&op, &scales, grid, eps)?;
    let residual: Vec<f64> = (0..grid.len()).map(|k| (exact[k] - weyl[k] - orbit[k]).abs()).collect();
    let reference_deviation = exact
        .iter()
        .zip(&reference)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(DensityEvaluation {
        lambda_grid: grid.to_vec(),
        epsilon: eps,
        max_residual: residual.iter().cloned().fold(0.0, f64::max),
        peak_density: exact.iter().cloned().fold(0.0, f64::max),
        exact_density: exact,
        weyl_term: weyl,
        orbit_term: orbit,
        residual,
        reference_density: reference,
        orbit_cutoffs: (n, max_rep),
        reference_deviation,
    })
}

/// Trapezoid rule on a sampled curve.
pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::orbits::enumerate_orbits;

    const STD: LaplacianKind = LaplacianKind::Standard;

    #[test]
    fn lorentzian_peak() {
        let g = Graph::unweighted(1, &[]).unwrap();
        let op = build_laplacian(&g, STD).unwrap();
        let d = smoothed_density_exact(&op, &[0.0], 0.2).unwrap();
        assert!((d[0] - 1.0 / (PI * 0.2)).abs() < 1e-12);
        assert!(smoothed_density_exact(&op, &[0.0], 1e-4).is_err());
    }

    #[test]
    fn weyl_values() {
        let k4 = fixtures::complete(4);
        let w = weyl_term(&k4, &[3.0, 1e9], 0.0, STD).unwrap();
        assert!((w[0] - 4.0 / (3.0 * PI)).abs() < 1e-14);
        assert!(w[1] < 1e-12);
    }

    #[test]
    fn total_mass() {
        let g = fixtures::cycle(6);
        let op = build_laplacian(&g, STD).unwrap();
        let grid = linear_grid(-20.0, 24.0, 44_000).unwrap();
        let d = smoothed_density_exact(&op, &grid, 0.1).unwrap();
        let mass = trapezoid(&grid, &d);
        assert!(mass > 0.98 * 6.0 && mass <= 6.0, "{mass}");
    }

    #[test]
    fn path_orbit_derivative_matches_analytic() {
        // one orbit with amplitude a(λ) = −e^{2iα}, a'(λ) = −2i α'(λ) e^{2iα}
        let g = fixtures::path(2);
        let cat = enumerate_orbits(&g.directed_bonds(), 2).unwrap();
        let eps = 0.3;
        let x = 0.7;
        let fd = orbit_term(&cat, &g, &[x], eps, 2, 1, STD).unwrap()[0];
        let lam = Complex64::new(x, -eps);
        let i = Complex64::i();
        let e = (1.0 + i * (1.0 - lam)) / (1.0 - i * (1.0 - lam));
        // d/dλ of e^{iα} = −2i/(1 − i(1−λ))²
        let de = -2.0 * i / (1.0 - i * (1.0 - lam)).powu(2);
        let da = -2.0 * e * de;
        let analytic = -da.im / PI;
        assert!((fd - analytic).abs() < 1e-6, "{fd} {analytic}");
    }

    #[test]
    fn reference_identity() {
        let g = fixtures::complete(4);
        let cat = enumerate_orbits(&g.directed_bonds(), 4).unwrap();
        let grid = linear_grid(-1.0, 6.0, 70).unwrap();
        let rep = trace_formula_report(&cat, &g, &grid, 0.3, 4, 2, STD).unwrap();
        assert!(rep.reference_deviation < 1e-8, "{}", rep.reference_deviation);
    }

    #[test]
    fn weighted_path_peaks() {
        let g = Graph::new(2, &[(0, 1)], Some(vec![5.0])).unwrap();
        let op = build_laplacian(&g, LaplacianKind::Generalized).unwrap();
        let d = smoothed_density_exact(&op, &[0.0, 5.0, 10.0], 0.3).unwrap();
        assert!(d[0] > 10.0 * d[1] && d[2] > 10.0 * d[1]);
    }

    #[test]
    fn csv_header() {
        let g = fixtures::path(2);
        let cat = enumerate_orbits(&g.directed_bonds(), 2).unwrap();
        let rep = trace_formula_report(&cat, &g, &[0.0, 1.0], 0.3, 2, 1, STD).unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("lambda,exact,weyl,orbit,residual\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
