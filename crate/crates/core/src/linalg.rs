//! Dense complex linear algebra sized for desk-scale graphs.
//!
//! Matrices are row-major `Complex64` buffers. The kernel offers an LU
//! determinant with partial pivoting, a cyclic Jacobi eigensolver for
//! Hermitian (and therefore real symmetric) input, and a general eigensolver
//! built from Householder reduction to Hessenberg form followed by
//! single-shift complex QR iteration.

use std::cmp::Ordering;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance used to decide that an input matrix is real symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Default distance under which eigenvalues are reported as one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;
/// QR sweeps allowed per eigenvalue deflation.
pub const QR_SWEEP_CAP: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from a row-major buffer, rejecting NaN and infinities.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        self.map(|z| z * s)
    }

    /// `self - other`, entrywise.
    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `I - self`.
    pub fn identity_minus(&self) -> Result<ComplexMatrix> {
        let n = self.ensure_square()?;
        let mut m = self.scale(-ONE);
        for i in 0..n {
            m[(i, i)] += ONE;
        }
        Ok(m)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn pow(&self, n: u32) -> Result<ComplexMatrix> {
        let dim = self.ensure_square()?;
        let mut result = ComplexMatrix::identity(dim);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(result)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖U U† − I‖_max`.
    pub fn unitarity_defect(&self) -> Result<f64> {
        let n = self.ensure_square()?;
        let prod = self.matmul(&self.adjoint())?;
        Ok(prod.sub(&ComplexMatrix::identity(n))?.max_abs())
    }

    pub fn is_real_symmetric(&self, tol: f64) -> bool {
        self.symmetry_defect().map(|d| d < tol).unwrap_or(false)
    }

    fn symmetry_defect(&self) -> Result<f64> {
        let n = self.ensure_square()?;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                worst = worst.max(a.im.abs()).max((a - self[(j, i)]).norm());
            }
        }
        Ok(worst)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization `P A = L U` with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        let n = m.ensure_square()?;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= f * u;
                }
            }
        }
        Ok(Self { n, lu, perm, swaps })
    }

    pub fn determinant(&self) -> Complex64 {
        let diag: Complex64 = (0..self.n).map(|i| self.lu[i * self.n + i]).product();
        if self.swaps % 2 == 1 {
            -diag
        } else {
            diag
        }
    }

    /// Solves `A x = b`. Exactly-zero pivots are replaced by a tiny value so
    /// that inverse iteration on singular shifts still produces a direction.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[i * n + k];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[i * n + k];
                let xk = x[k];
                x[i] -= u * xk;
            }
            let mut piv = self.lu[i * n + i];
            if piv == ZERO {
                piv = Complex64::new(f64::EPSILON * f64::EPSILON, 0.0);
            }
            x[i] /= piv;
        }
        Ok(x)
    }
}

/// Determinant by LU with partial pivoting; the permutation sign is tracked
/// exactly from the swap count.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64> {
    Ok(Lu::new(m)?.determinant())
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<Complex64>,
    /// Eigenvectors as columns, when requested.
    #[serde(skip)]
    pub eigenvectors: Option<ComplexMatrix>,
    /// `max_k ‖A x_k − λ_k x_k‖` over the returned pairs.
    pub residual: Option<f64>,
    pub cluster_tol: f64,
}

impl SpectralResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn with_cluster_tol(mut self, tol: f64) -> Self {
        self.cluster_tol = tol;
        self
    }

    /// Groups eigenvalues closer than `cluster_tol` (single linkage in the
    /// reported order) and returns each cluster's mean with its size.
    pub fn clusters(&self) -> Vec<(Complex64, usize)> {
        let mut groups: Vec<Vec<Complex64>> = Vec::new();
        for &z in &self.eigenvalues {
            match groups
                .iter_mut()
                .find(|g| g.iter().any(|w| (w - z).norm() < self.cluster_tol))
            {
                Some(g) => g.push(z),
                None => groups.push(vec![z]),
            }
        }
        groups
            .into_iter()
            .map(|g| {
                let n = g.len();
                (g.iter().sum::<Complex64>() / n as f64, n)
            })
            .collect()
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns ascending real eigenvalues and the unitary matrix of eigenvectors
/// (columns).
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.ensure_square()?;
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-17 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let h = a[(p, q)];
                let habs = h.norm();
                if habs <= 1e-300 {
                    continue;
                }
                let phase = h / habs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * habs);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = -phase.conj() * s;
                let g_qq = phase.conj() * c;
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * g_pp + arq * g_qp;
                    a[(r, q)] = arp * g_pq + arq * g_qq;
                }
                for r in 0..n {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = g_pp.conj() * apr + g_qp.conj() * aqr;
                    a[(q, r)] = g_pq.conj() * apr + g_qq.conj() * aqr;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * g_pp + vrq * g_qp;
                    v[(r, q)] = vrp * g_pq + vrq * g_qq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    Ok((values, vectors))
}

fn max_residual(m: &ComplexMatrix, values: &[Complex64], vectors: &ComplexMatrix) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, &lam) in values.iter().enumerate() {
        let x = vectors.column(k);
        let ax = m.matvec(&x)?;
        let r = ax
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b * lam).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Spectrum of a real symmetric matrix, ascending, with eigenvectors.
pub fn eig_symmetric(m: &ComplexMatrix) -> Result<SpectralResult> {
    let defect = m.symmetry_defect()?;
    if defect >= SYMMETRY_TOL {
        return Err(Error::NotSymmetric(defect));
    }
    let (values, vectors) = eig_hermitian(m)?;
    let values: Vec<Complex64> = values.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    let residual = max_residual(m, &values, &vectors)?;
    Ok(SpectralResult {
        eigenvalues: values,
        eigenvectors: Some(vectors),
        residual: Some(residual),
        cluster_tol: DEFAULT_CLUSTER_TOL,
    })
}

fn reduce_to_hessenberg(h: &mut ComplexMatrix) {
    let n = h.rows;
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // H <- (I - 2 v v†) H (I - 2 v v†)
        for j in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * s * 2.0;
            }
        }
        for i in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(j, vj)| h[(i, k + 1 + j)] * vj).sum();
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= s * vj.conj() * 2.0;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

fn block_eigenvalues(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half = (a + d) / 2.0;
    let det = a * d - b * c;
    let disc = (half * half - det).sqrt();
    let big = if (half + disc).norm() >= (half - disc).norm() { half + disc } else { half - disc };
    let small = if big.norm() > 0.0 { det / big } else { ZERO };
    (big, small)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr / 4.0 - det).sqrt();
    let l1 = tr / 2.0 + disc;
    let l2 = tr / 2.0 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a general complex matrix, sorted by descending modulus
/// then ascending argument. Non-convergence is a hard error.
pub fn eig_general(m: &ComplexMatrix) -> Result<SpectralResult> {
    let n = m.ensure_square()?;
    let mut h = m.clone();
    reduce_to_hessenberg(&mut h);
    let mut values = vec![ZERO; n];
    let norm = h.max_abs().max(f64::MIN_POSITIVE);
    let deflate = f64::EPSILON * n.max(4) as f64;

    let mut hi = n;
    let mut iter = 0usize;
    while hi > 0 {
        let last = hi - 1;
        // find start of the active unreduced block
        let mut lo = last;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if diag == 0.0 {
                diag = norm;
            }
            // scaled by n: near-degenerate pairs stall with the subdiagonal
            // a few ulps above the plain relative test
            if sub <= deflate * diag.max(norm) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == last {
            values[last] = h[(last, last)];
            hi -= 1;
            iter = 0;
            continue;
        }
        if lo + 1 == last {
            // a 2×2 block is solved in closed form; near-double pairs otherwise
            // creep toward deflation one ulp-scale step at a time
            let (a, b) = block_eigenvalues(h[(lo, lo)], h[(lo, last)], h[(last, lo)], h[(last, last)]);
            values[lo] = a;
            values[last] = b;
            hi -= 2;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > QR_SWEEP_CAP {
            return Err(Error::NoConvergence {
                sweeps: QR_SWEEP_CAP,
                remaining: hi,
            });
        }
        let mu = if iter.is_multiple_of(10) {
            // exceptional shift breaks symmetric stalls (e.g. cyclic permutations)
            h[(last, last)] + Complex64::new(0.75 * h[(last, last - 1)].norm(), 0.31 * h[(last, last - 1)].norm())
        } else {
            wilkinson_shift(
                h[(last - 1, last - 1)],
                h[(last - 1, last)],
                h[(last, last - 1)],
                h[(last, last)],
            )
        };
        for i in lo..=last {
            h[(i, i)] -= mu;
        }
        let mut rotations = Vec::with_capacity(last - lo);
        for k in lo..last {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (1.0, ZERO)
            } else if a.norm() == 0.0 {
                (0.0, b.conj() / b.norm())
            } else {
                (a.norm() / r, (a / a.norm()) * b.conj() / r)
            };
            for j in k..=last {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            let rmax = (k + 2).min(last);
            for i in lo..=rmax {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=last {
            h[(i, i)] += mu;
        }
    }
    sort_by_modulus(&mut values);
    Ok(SpectralResult {
        eigenvalues: values,
        eigenvectors: None,
        residual: None,
        cluster_tol: DEFAULT_CLUSTER_TOL,
    })
}

/// Descending modulus, ties broken by ascending argument.
/// Moduli are compared after rounding to 1e−10 so that rounding noise does
/// not override the argument order.
pub fn sort_by_modulus(values: &mut [Complex64]) {
    values.sort_by(|a, b| match modulus_key(b).cmp(&modulus_key(a)) {
        Ordering::Equal => a.arg().total_cmp(&b.arg()),
        o => o,
    });
}

fn modulus_key(z: &Complex64) -> i64 {
    (z.norm() * 1e10).round() as i64
}

/// Eigenvector for a known eigenvalue `mu` by inverse iteration.
pub fn eigenvector(m: &ComplexMatrix, mu: Complex64) -> Result<Vec<Complex64>> {
    let n = m.ensure_square()?;
    let shift = mu + Complex64::new(1e-10 * m.max_abs().max(1.0), 0.0);
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let lu = Lu::new(&shifted)?;
    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.0)).collect();
    for _ in 0..3 {
        x = lu.solve(&x)?;
        normalize(&mut x);
    }
    Ok(x)
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(x: &mut [Complex64]) {
    let n = norm2(x);
    if n > 0.0 {
        for z in x.iter_mut() {
            *z /= n;
        }
    }
}

/// Greedy multiset matching: both lists are sorted by (modulus, argument),
/// each element of `a` is paired with the nearest unused element of `b`,
/// and the largest pair distance is returned.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let key = |x: &Complex64, y: &Complex64| match modulus_key(x).cmp(&modulus_key(y)) {
        Ordering::Equal => x.arg().total_cmp(&y.arg()),
        o => o,
    };
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(key);
    b.sort_by(key);
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in &a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, p| if p.1 < acc.1 { p } else { acc });
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&ComplexMatrix::identity(3)).unwrap(), c(1.0, 0.0));
        let mut d = ComplexMatrix::zeros(2, 2);
        d[(0, 0)] = c(2.0, 0.0);
        d[(1, 1)] = c(0.0, 3.0);
        assert!((determinant(&d).unwrap() - c(0.0, 6.0)).norm() < 1e-15);
        let (a, b) = (c(1.5, -0.5), c(-2.0, 0.25));
        let m = ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), a, b, c(0.0, 0.0)]).unwrap();
        assert!((determinant(&m).unwrap() + a * b).norm() < 1e-15);
    }

    #[test]
    fn determinant_rejects_non_square() {
        assert!(matches!(
            determinant(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn construction_rejects_nan() {
        let r = ComplexMatrix::from_vec(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite { row: 0, col: 1 })));
    }

    #[test]
    fn symmetric_examples() {
        let p2 = ComplexMatrix::from_real(2, 2, &[1.0, -1.0, -1.0, 1.0]).unwrap();
        let r = eig_symmetric(&p2).unwrap();
        assert!((r.real_values()[0]).abs() < 1e-14);
        assert!((r.real_values()[1] - 2.0).abs() < 1e-14);
        assert!(r.eigenvalues.iter().all(|z| z.im == 0.0));

        let k4 = ComplexMatrix::from_fn(4, 4, |i, j| c(if i == j { 3.0 } else { -1.0 }, 0.0));
        let r = eig_symmetric(&k4).unwrap();
        let v = r.real_values();
        assert!(v[0].abs() < 1e-13);
        assert!(v[1..].iter().all(|x| (x - 4.0).abs() < 1e-13));
        assert!(r.residual.unwrap() < 1e-10 * 4.0);
        let clusters = r.clusters();
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[1].1, 3);

        let c3 = ComplexMatrix::from_fn(3, 3, |i, j| c(if i == j { 2.0 } else { -1.0 }, 0.0));
        let v = eig_symmetric(&c3).unwrap().real_values();
        assert!(v[0].abs() < 1e-13 && (v[1] - 3.0).abs() < 1e-13 && (v[2] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn symmetric_rejects_asymmetry() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.0, 1.0]).unwrap();
        assert!(matches!(eig_symmetric(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn general_examples() {
        let swap = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let v = eig_general(&swap).unwrap().eigenvalues;
        assert!((v[0] - c(1.0, 0.0)).norm() < 1e-14 || (v[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(multiset_distance(&v, &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-14);

        let rot = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        let v = eig_general(&rot).unwrap().eigenvalues;
        assert!(multiset_distance(&v, &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-14);
        // sorted by argument on equal modulus
        assert!(v[0].im < 0.0);

        // companion matrix of z^2 - 3z + 2
        let comp = ComplexMatrix::from_real(2, 2, &[3.0, -2.0, 1.0, 0.0]).unwrap();
        let v = eig_general(&comp).unwrap().eigenvalues;
        assert!((v[0] - c(2.0, 0.0)).norm() < 1e-13);
        assert!((v[1] - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn cyclic_permutation_converges() {
        let n = 7;
        let m = ComplexMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { ONE } else { ZERO });
        let v = eig_general(&m).unwrap().eigenvalues;
        for z in &v {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(n as u32) - ONE).norm() < 1e-11);
        }
    }

    #[test]
    fn inverse_iteration_recovers_vector() {
        let m = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let x = eigenvector(&m, c(3.0, 0.0)).unwrap();
        assert!((x[0] - x[1]).norm() < 1e-9);
    }
}
