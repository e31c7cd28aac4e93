//! Zeta functions: the orbit zeta of `U(λ)` in determinant and product form,
//! the Ihara and Stark zetas, and the `z`-form for regular graphs.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedBondSpace, Graph};
use crate::laplacian::{build_laplacian, vertex_scale, LaplacianKind};
use crate::linalg::{self, ComplexMatrix};
use crate::orbits::OrbitCatalog;
use crate::scattering::build_u;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Product side against determinant side, with the disagreement in the open.
#[derive(Clone, Debug, Serialize)]
pub struct ZetaEvaluation {
    /// Truncated product.
    pub value: Complex64,
    /// Determinant reference.
    pub det_value: Complex64,
    pub truncation_length: usize,
    /// `|product_N − product_{N−1}| / |product_N|`.
    pub convergence_gap: f64,
    /// `|value − det_value| / |det_value|`.
    pub relative_error: f64,
    /// Spectral radius of the transfer operator behind the product.
    pub spectral_radius: Option<f64>,
    pub warning: Option<String>,
}

impl ZetaEvaluation {
    fn new(value: Complex64, previous: Complex64, det_value: Complex64, n: usize) -> Self {
        Self {
            value,
            det_value,
            truncation_length: n,
            convergence_gap: (value - previous).norm() / value.norm(),
            relative_error: (value - det_value).norm() / det_value.norm(),
            spectral_radius: None,
            warning: None,
        }
    }
}

fn pole_guarded_product(scales: &[f64], lambda: Complex64, f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
    let mut prod = ONE;
    for (vertex, &s) in scales.iter().enumerate() {
        let factor = f(s);
        if factor.norm() < 1e-12 * s {
            return Err(Error::Pole { vertex, lambda });
        }
        prod *= factor;
    }
    Ok(prod)
}

/// `det(λI − L) / Π_j (s_j + i(s_j − λ))`. Its ratio to `det(I − U)` is not
/// constant in λ; compare `zeta_s_inverse`.
pub fn zeta_s_det(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let scales = vertex_scale(g, kind)?;
    let denom = pole_guarded_product(&scales, lambda, |s| s + I * (s - lambda))?;
    Ok(build_laplacian(g, kind)?.char_poly_value(lambda)? / denom)
}

/// `det(λI − L) / Π_j (λ − s_j(1 + i))`, which equals `2^{−B} det(I − U(λ))`
/// for every λ.
pub fn zeta_s_inverse(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let scales = vertex_scale(g, kind)?;
    let denom = pole_guarded_product(&scales, lambda, |s| lambda - s * (ONE + I))?;
    Ok(build_laplacian(g, kind)?.char_poly_value(lambda)? / denom)
}

/// `det(I − U) · Π_j (s_j + i(s_j − λ)) / det(λI − L)`.
pub fn identity_ratio(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let det = build_u(g, lambda, kind)?.secular_determinant()?;
    Ok(det / zeta_s_det(g, lambda, kind)?)
}

/// `det(I − U) · Π_j (λ − s_j(1 + i)) / det(λI − L)`; constant `2^B`.
pub fn corrected_identity_ratio(g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let det = build_u(g, lambda, kind)?.secular_determinant()?;
    Ok(det / zeta_s_inverse(g, lambda, kind)?)
}

/// Truncated `Π_{n_p ≤ N} (1 − a_p(λ))` against `det(I − U(λ))`.
pub fn zeta_s_product(catalog: &OrbitCatalog, g: &Graph, lambda: Complex64, n: usize, kind: LaplacianKind) -> Result<ZetaEvaluation> {
    catalog.require_full()?;
    catalog.require_depth(n)?;
    let u = build_u(g, lambda, kind)?;
    let table = catalog.signatures(g, kind, n)?;
    let values = table.class_values(&u.matrix);
    // log-sum per period; exp removes the branch ambiguity of each log
    let mut log_by_period = vec![Complex64::new(0.0, 0.0); n + 1];
    for group in &table.groups {
        let a = group.amplitude(&values);
        log_by_period[group.period] += (ONE - a).ln() * group.count as f64;
    }
    let log_prev: Complex64 = log_by_period[..n].iter().sum();
    let log_all = log_prev + log_by_period[n];
    let det = u.secular_determinant()?;
    let mut eval = ZetaEvaluation::new(log_all.exp(), log_prev.exp(), det, n);
    eval.spectral_radius = Some(u.spectral_radius()?);
    if lambda.im >= 0.0 {
        eval.warning = Some("product is not guaranteed to converge for Im λ ≥ 0".into());
    }
    Ok(eval)
}

/// `(1 − u²)^{r−1} det(I − uC + u²Q)` with `Q = D − I`.
pub fn ihara_zeta_det(g: &Graph, u: Complex64) -> Result<Complex64> {
    let r = g.rank()? as i32;
    let n = g.num_vertices();
    let c = g.connectivity_matrix();
    let degrees = g.degrees();
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j {
            ONE + u * u * (degrees.valency[i] as f64 - 1.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        diag - u * c[(i, j)]
    });
    Ok((ONE - u * u).powi(r - 1) * linalg::determinant(&m)?)
}

/// `Π_{n ≤ N} (1 − uⁿ)^{|C(n)|}`.
pub fn ihara_zeta_product(catalog: &OrbitCatalog, g: &Graph, u: Complex64, n: usize) -> Result<ZetaEvaluation> {
    catalog.require_depth(n)?;
    let mut log_by_len = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, slot) in log_by_len.iter_mut().enumerate().skip(1) {
        let count = catalog.count_no_backtrack(k);
        if count > 0 {
            *slot = (ONE - u.powu(k as u32)).ln() * count as f64;
        }
    }
    let log_prev: Complex64 = log_by_len[..n].iter().sum();
    let log_all = log_prev + log_by_len[n];
    let det = ihara_zeta_det(g, u)?;
    let mut eval = ZetaEvaluation::new(log_all.exp(), log_prev.exp(), det, n);
    let w = g.directed_bonds().non_backtracking_matrix().scale(u);
    let rho = linalg::eig_general(&w)?.spectral_radius();
    eval.spectral_radius = Some(rho);
    if rho >= 1.0 {
        eval.warning = Some(format!("spectral radius of uW is {rho}"));
    }
    Ok(eval)
}

/// `Y_{d',d} = η_{d',d}` when `d'` follows `d` without reversing it, else 0.
pub fn stark_matrix(space: &DirectedBondSpace, eta: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = space.len();
    if eta.rows() != n || eta.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: eta.rows() * eta.cols(),
        });
    }
    let mut y = ComplexMatrix::zeros(n, n);
    for d in 0..n {
        for &e in space.successors(d) {
            if e != space.reversal(d) {
                y[(e, d)] = eta[(e, d)];
            }
        }
    }
    Ok(y)
}

/// Constant edge weights `η ≡ u`.
pub fn constant_eta(space: &DirectedBondSpace, u: Complex64) -> ComplexMatrix {
    let n = space.len();
    ComplexMatrix::from_fn(n, n, |_, _| u)
}

/// `det(I − Y)` against `Π_{c ∈ C, n_c ≤ N} (1 − f_c)` where `f_c` is the
/// cyclic product of η along `c`.
pub fn stark_zeta(space: &DirectedBondSpace, eta: &ComplexMatrix, catalog: &OrbitCatalog, n: usize) -> Result<ZetaEvaluation> {
    catalog.require_depth(n)?;
    let y = stark_matrix(space, eta)?;
    let mut log_by_len = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, slot) in log_by_len.iter_mut().enumerate().skip(1) {
        for p in catalog.orbits(k).filter(|p| p.beta == 0) {
            *slot += (ONE - p.amplitude(&y)).ln();
        }
    }
    let log_prev: Complex64 = log_by_len[..n].iter().sum();
    let log_all = log_prev + log_by_len[n];
    let det = linalg::determinant(&y.identity_minus()?)?;
    let mut eval = ZetaEvaluation::new(log_all.exp(), log_prev.exp(), det, n);
    let rho = linalg::eig_general(&y)?.spectral_radius();
    eval.spectral_radius = Some(rho);
    if rho >= 1.0 {
        eval.warning = Some(format!("spectral radius of Y is {rho}"));
    }
    Ok(eval)
}

pub fn mobius(n: usize) -> i64 {
    let mut m = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

/// Radius of the sampling circle for the log-series expansion of the Ihara
/// determinant: well inside the zero-free disc `|u| < 1/(v_max − 1)`.
pub fn log_series_radius(g: &Graph) -> f64 {
    let vmax = g.degrees().valency.iter().copied().max().unwrap_or(1) as f64;
    if vmax <= 1.0 {
        0.25
    } else {
        (0.5 / (vmax - 1.0)).min(0.25)
    }
}

const DFT_POINTS: usize = 64;

/// Primitive cycle counts `|C(m)|`, `m = 1..=max_n`, read off a zeta
/// reciprocal `f(u) = Π_c (1 − u^{n_c})` by expanding `−log f(u) = Σ N_m uᵐ/m`
/// with a 64-point DFT on `|u| = radius`, then Möbius-inverting
/// `N_m = Σ_{d|m} d |C(d)|`. Counts are returned unrounded.
pub fn log_series_counts(f: impl Fn(Complex64) -> Result<Complex64>, radius: f64, max_n: usize) -> Result<Vec<f64>> {
    if max_n >= DFT_POINTS / 2 {
        return Err(Error::InvalidArgument(format!("log-series expansion limited to n < {}", DFT_POINTS / 2)));
    }
    let mut logs = Vec::with_capacity(DFT_POINTS);
    let mut prev_arg: Option<f64> = None;
    let mut winding = 0.0;
    for k in 0..DFT_POINTS {
        let u = Complex64::from_polar(radius, 2.0 * PI * k as f64 / DFT_POINTS as f64);
        let value = f(u)?;
        let mut arg = value.arg();
        if let Some(p) = prev_arg {
            // unwrap so the logarithm is continuous around the circle
            while arg + winding - p > PI {
                winding -= 2.0 * PI;
            }
            while arg + winding - p < -PI {
                winding += 2.0 * PI;
            }
        }
        arg += winding;
        prev_arg = Some(arg);
        logs.push(Complex64::new(value.norm().ln(), arg));
    }
    let big_n: Vec<f64> = (0..=max_n)
        .map(|m| {
            let c: Complex64 = logs
                .iter()
                .enumerate()
                .map(|(k, l)| l * Complex64::from_polar(1.0, -2.0 * PI * (k * m) as f64 / DFT_POINTS as f64))
                .sum::<Complex64>()
                / DFT_POINTS as f64;
            -(m as f64) * c.re / radius.powi(m as i32)
        })
        .collect();
    Ok((1..=max_n)
        .map(|m| {
            let s: f64 = (1..=m)
                .filter(|d| m % d == 0)
                .map(|d| mobius(m / d) as f64 * big_n[d])
                .sum();
            s / m as f64
        })
        .collect())
}

/// `|C(m)|` from the Ihara determinant.
pub fn ihara_counts_from_det(g: &Graph, max_n: usize) -> Result<Vec<f64>> {
    log_series_counts(|u| ihara_zeta_det(g, u), log_series_radius(g), max_n)
}

/// `|C(m)|` from the Stark determinant `det(I − Y)` at constant `η ≡ u`.
pub fn stark_counts(g: &Graph, max_n: usize) -> Result<Vec<f64>> {
    let space = g.directed_bonds();
    let w = stark_matrix(&space, &constant_eta(&space, ONE))?;
    log_series_counts(
        |u| linalg::determinant(&w.scale(u).identity_minus()?),
        log_series_radius(g),
        max_n,
    )
}

/// `λ(z) = v(1 + i(z − 1)/(z + 1))`; inverse of `z = e^{iα(λ)}`.
pub fn lambda_from_z(v: usize, z: Complex64) -> Complex64 {
    (ONE + I * (z - ONE) / (z + ONE)) * v as f64
}

/// `z(λ) = e^{iα(λ)}`.
pub fn z_from_lambda(v: usize, lambda: Complex64) -> Complex64 {
    let v = v as f64;
    (v + I * (v - lambda)) / (v - I * (v - lambda))
}

/// `(2z/(z+1))^V · det(C + iv((z−1)/(z+1)) I)` for a `v`-regular graph.
pub fn zeta_s_regular_z(g: &Graph, z: Complex64) -> Result<Complex64> {
    let v = g.require_regular()?;
    if (z + ONE).norm() < 1e-14 {
        return Err(Error::InvalidArgument("z = −1 is excluded".into()));
    }
    let t = (z - ONE) / (z + ONE);
    let mut m = g.connectivity_matrix();
    for i in 0..g.num_vertices() {
        m[(i, i)] += I * t * v as f64;
    }
    let prefactor = (z * 2.0 / (z + ONE)).powu(g.num_vertices() as u32);
    Ok(prefactor * linalg::determinant(&m)?)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FunctionalEquationCheck {
    pub z: Complex64,
    /// `|γ(1/z) − conj γ(conj z)|`.
    pub defect: f64,
    /// `|γ(z)|`, for judging the defect.
    pub magnitude: f64,
    /// `z` lies within 1e−9 of the negative real axis.
    pub near_branch_cut: bool,
}

/// `γ(z) = z^{V/2} ζ_S(z)` with `ζ_S = 1 / zeta_s_regular_z` and the
/// principal branch of `z^{V/2}`.
pub fn gamma_s(g: &Graph, z: Complex64) -> Result<Complex64> {
    let half_power = (z.ln() * (g.num_vertices() as f64 / 2.0)).exp();
    Ok(half_power / zeta_s_regular_z(g, z)?)
}

pub fn functional_equation_check(g: &Graph, z: Complex64) -> Result<FunctionalEquationCheck> {
    g.require_regular()?;
    if z.norm() < 1e-14 {
        return Err(Error::InvalidArgument("z = 0 is excluded".into()));
    }
    let lhs = gamma_s(g, ONE / z)?;
    let rhs = gamma_s(g, z.conj())?.conj();
    Ok(FunctionalEquationCheck {
        z,
        defect: (lhs - rhs).norm(),
        magnitude: gamma_s(g, z)?.norm(),
        near_branch_cut: (z.arg().abs() - PI).abs() < 1e-9,
    })
}
