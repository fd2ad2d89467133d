//! Dense complex linear algebra.
//!
//! Everything here is deliberately dependency-free and sequential: the same
//! input produces bit-identical output on every run, which the spectral
//! consistency checks elsewhere in the crate rely on.

use num_complex::Complex;

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Eigenvalues closer than this are treated as one degenerate cluster when
/// fixing the output order.
pub const DEGENERATE_GAP: f64 = 1e-10;

/// Smallest component magnitude that counts when ordering degenerate
/// eigenvectors by their first significant entry.
const SIGNIFICANT_COMPONENT: f64 = 1e-8;

/// Sweep convergence: off-diagonal Frobenius norm relative to the input norm.
const JACOBI_OFF_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 100;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from a row-major entry buffer.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::BadEntryCount {
                got: entries.len(),
                expected: rows * cols,
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix entries",
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Zero matrix. Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix. Panics if `n` is zero.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds an `rows x cols` matrix entry by entry.
    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    /// Square matrix with the given real diagonal.
    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
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

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = value;
    }

    /// Copy of column `j`.
    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_col(&mut self, j: usize, column: &[Complex64]) {
        assert_eq!(column.len(), self.rows);
        for (i, &z) in column.iter().enumerate() {
            self.set(i, j, z);
        }
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Sum of the diagonal. Square matrices only.
    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            acc += self.get(i, i);
        }
        Ok(acc)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Entrywise difference. Panics on shape mismatch.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of `self - self^H`; infinite for non-square input.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// Result of [`hermitian_eig`]: eigenvalues in descending order, eigenvectors
/// as the matching columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Diagonalizes a Hermitian matrix with cyclic Jacobi rotations.
///
/// Output conventions, all deterministic:
/// - eigenvalues sorted in descending order;
/// - each eigenvector is scaled so its largest-magnitude component (first
///   such index on ties) is real and positive;
/// - eigenvalues closer than [`DEGENERATE_GAP`] form a cluster whose members
///   are ordered by the index of their first significant component.
///
/// Fails with a validation error if `a` deviates from Hermiticity by more
/// than `tol`, and with a numerical error if 100 sweeps do not push the
/// off-diagonal Frobenius norm below `1e-14 * ||a||`.
pub fn hermitian_eig(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigenDecomposition> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let deviation = a.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let n = a.rows;

    // Work on the Hermitian average so a within-tolerance input cannot leave
    // stray asymmetry in the sweep.
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            if i == j {
                m.set(i, j, Complex64::new(v.re, 0.0));
            } else {
                m.set(i, j, v);
            }
        }
    }

    let target = JACOBI_OFF_TOL * m.frobenius_norm();
    let mut u = ComplexMatrix::identity(n);
    let mut sweeps = 0;
    while off_diagonal_norm(&m) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: off_diagonal_norm(&m),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut m, &mut u, p, q);
            }
        }
        sweeps += 1;
    }

    // Sort descending; Rust's stable sort keeps sweep order on exact ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m.get(j, j)
            .re
            .partial_cmp(&m.get(i, i).re)
            .expect("eigenvalues are finite")
    });

    let mut eigenvalues: Vec<f64> = order.iter().map(|&i| m.get(i, i).re).collect();
    let mut columns: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&i| fix_column_phase(u.col(i)))
        .collect();
    order_degenerate_clusters(&mut eigenvalues, &mut columns);

    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        eigenvectors.set_col(j, col);
    }
    Ok(HermitianEigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One two-sided Jacobi rotation zeroing the (p, q) entry of a Hermitian
/// matrix, accumulated into `u`.
fn jacobi_rotate(m: &mut ComplexMatrix, u: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // Rotation R: R_pp = c, R_pq = s, R_qp = -s e^{-i phi}, R_qq = c e^{-i phi},
    // where phi is the phase of the (p, q) entry. Then R^H M R zeroes (p, q).
    let sp = phase.conj() * s;
    let cp = phase.conj() * c;

    let n = m.rows();
    for i in 0..n {
        let aip = m.get(i, p);
        let aiq = m.get(i, q);
        m.set(i, p, aip * c - aiq * sp);
        m.set(i, q, aip * s + aiq * cp);
    }
    for j in 0..n {
        let apj = m.get(p, j);
        let aqj = m.get(q, j);
        m.set(p, j, apj * c - aqj * sp.conj());
        m.set(q, j, apj * s + aqj * cp.conj());
    }
    // The 2x2 block is known in closed form; writing it directly keeps the
    // matrix exactly Hermitian at the entries the rotation touched.
    m.set(p, p, Complex64::new(app - t * r, 0.0));
    m.set(q, q, Complex64::new(aqq + t * r, 0.0));
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));

    for i in 0..n {
        let uip = u.get(i, p);
        let uiq = u.get(i, q);
        u.set(i, p, uip * c - uiq * sp);
        u.set(i, q, uip * s + uiq * cp);
    }
}

/// Rescales a vector so its largest-magnitude component (first index on
/// ties) is real and positive.
fn fix_column_phase(mut col: Vec<Complex64>) -> Vec<Complex64> {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in col.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    if best_mag > 0.0 {
        let factor = col[best].conj() / best_mag;
        for z in &mut col {
            *z *= factor;
        }
        // Kill the residual imaginary dust on the anchor component.
        col[best] = Complex64::new(col[best].re, 0.0);
    }
    col
}

fn first_significant_index(col: &[Complex64]) -> usize {
    col.iter()
        .position(|z| z.norm() > SIGNIFICANT_COMPONENT)
        .unwrap_or(col.len())
}

/// Reorders members of each degenerate cluster by the index of their first
/// significant component, so repeated eigenvalues still come out in a
/// reproducible column order.
fn order_degenerate_clusters(eigenvalues: &mut [f64], columns: &mut [Vec<Complex64>]) {
    let n = eigenvalues.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end - 1] - eigenvalues[end]).abs() < DEGENERATE_GAP {
            end += 1;
        }
        if end - start > 1 {
            let mut cluster: Vec<(f64, Vec<Complex64>)> = (start..end)
                .map(|i| (eigenvalues[i], std::mem::take(&mut columns[i])))
                .collect();
            cluster.sort_by_key(|(_, col)| first_significant_index(col));
            for (offset, (val, col)) in cluster.into_iter().enumerate() {
                eigenvalues[start + offset] = val;
                columns[start + offset] = col;
            }
        }
        start = end;
    }
}

/// Singular value decomposition assembled from the eigendecomposition of the
/// left Gram matrix `d d^H`.
#[derive(Debug, Clone)]
pub struct GramSvd {
    /// Left singular vectors, `m x m` unitary.
    pub u: ComplexMatrix,
    /// Singular values, descending, `min(m, n)` of them.
    pub sigma: Vec<f64>,
    /// Right singular vectors, `n x n` unitary.
    pub v: ComplexMatrix,
}

impl GramSvd {
    /// Reassembles `u * diag(sigma) * v^H` for consistency checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        let mut middle = ComplexMatrix::zeros(m, n);
        for (l, &s) in self.sigma.iter().enumerate() {
            middle.set(l, l, Complex64::new(s, 0.0));
        }
        self.u
            .matmul(&middle)
            .and_then(|um| um.matmul(&self.v.adjoint()))
            .expect("shapes agree by construction")
    }
}

/// SVD of a rectangular complex matrix via its left Gram matrix.
///
/// The left factor comes from diagonalizing `d d^H`; each right column with
/// Gram eigenvalue above `tol` is paired through `v_{jl} = sum_k conj(d_{kj})
/// u_{kl}` and normalized, which keeps left and right vectors consistently
/// matched. Columns belonging to eigenvalues at or below `tol` are completed
/// by Gram-Schmidt over standard basis seeds taken in index order.
pub fn svd_via_gram(d: &ComplexMatrix, tol: f64) -> Result<GramSvd> {
    let m = d.rows();
    let n = d.cols();
    let gram = d.matmul(&d.adjoint())?;
    // The Gram product is Hermitian to the last bit, so any positive
    // tolerance is safe here.
    let eig = hermitian_eig(&gram, 1e-12)?;

    let n_sigma = m.min(n);
    let sigma: Vec<f64> = eig.eigenvalues[..n_sigma]
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();

    let mut v = ComplexMatrix::zeros(n, n);
    let mut filled = 0;
    for l in 0..n_sigma {
        if eig.eigenvalues[l] <= tol {
            break;
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for (j, slot) in col.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..m {
                acc += d.get(k, j).conj() * eig.eigenvectors.get(k, l);
            }
            *slot = acc;
        }
        let norm = vector_norm(&col);
        for z in &mut col {
            *z /= norm;
        }
        v.set_col(l, &col);
        filled += 1;
    }
    complete_orthonormal_columns(&mut v, filled)?;

    Ok(GramSvd {
        u: eig.eigenvectors,
        sigma,
        v,
    })
}

pub(crate) fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Fills columns `filled..` of `v` with an orthonormal completion of the
/// columns already present, seeded from standard basis vectors in index
/// order. Deterministic: candidates are scanned from index 0 and the first
/// one whose orthogonal residual clears the threshold wins.
pub(crate) fn complete_orthonormal_columns(v: &mut ComplexMatrix, filled: usize) -> Result<()> {
    let dim = v.rows();
    let total = v.cols();
    // If every candidate fell below this, the existing columns could not be
    // orthonormal, so progress is guaranteed.
    let threshold = 1.0 / (2.0 * dim as f64).sqrt();
    let mut used = vec![false; dim];
    for col_idx in filled..total {
        let mut chosen: Option<Vec<Complex64>> = None;
        for cand in 0..dim {
            if used[cand] {
                continue;
            }
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            w[cand] = Complex64::new(1.0, 0.0);
            // Two projection passes keep the result orthogonal to working
            // precision even when the residual is small.
            for _ in 0..2 {
                for prev in 0..col_idx {
                    let existing = v.col(prev);
                    let overlap = inner_product(&existing, &w);
                    for (wz, ez) in w.iter_mut().zip(existing.iter()) {
                        *wz -= overlap * ez;
                    }
                }
            }
            let norm = vector_norm(&w);
            if norm > threshold {
                for z in &mut w {
                    *z /= norm;
                }
                used[cand] = true;
                chosen = Some(w);
                break;
            }
        }
        match chosen {
            Some(w) => v.set_col(col_idx, &w),
            None => return Err(Error::BasisCompletion { threshold }),
        }
    }
    Ok(())
}
