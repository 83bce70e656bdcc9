//! Small dense matrix kernels.
//!
//! Everything here works on row-major `f64` matrices of desk-scale size
//! (tens of rows). Symmetric eigenproblems use cyclic Jacobi sweeps and
//! singular values use the one-sided (Hestenes) variant of the same
//! rotations, which keeps tiny singular values accurate enough for the
//! `1e-10` relative rank tolerance used throughout the crate.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

/// Default relative tolerance for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("ragged rows: row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
}

/// Dense real matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// 1×1 matrix.
    pub fn scalar(x: f64) -> Self {
        Self { rows: 1, cols: 1, data: vec![x] }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. An empty slice gives a 0×0 matrix.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::Ragged { row, len: r.len(), expected: cols });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r[..self.cols].to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product. Panics on inner-dimension mismatch.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul: {}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.data[i * self.cols + t];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[t * other.cols..(t + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self · x · selfᵀ`.
    pub fn congruence(&self, x: &Matrix) -> Matrix {
        self.matmul(x).matmul(&self.transpose())
    }

    /// `selfᵀ · x · self`.
    pub fn transpose_congruence(&self, x: &Matrix) -> Matrix {
        self.transpose().matmul(x).matmul(self)
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, other: &Matrix, s: f64) {
        assert_eq!(self.shape(), other.shape(), "add_scaled shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(other, 1.0);
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius inner product `tr(selfᵀ other)`.
    pub fn dot(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// `(S + Sᵀ)/2`. Panics if not square.
    pub fn symmetrized(&self) -> Matrix {
        assert!(self.is_square(), "symmetrized: matrix is {}x{}", self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }

    /// True when square and `|S - Sᵀ|` is within `rel_tol · max|S|` entrywise.
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= rel_tol * scale))
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "set_block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "add_block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] += block[(i, j)];
            }
        }
    }

    /// Horizontal concatenation; all parts must share the row count `rows`.
    pub fn hstack(rows: usize, parts: &[Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    /// Vertical concatenation; all parts must share the column count `cols`.
    pub fn vstack(cols: usize, parts: &[Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

/// Symmetric positive definite matrix, certified by a successful Cholesky
/// factorization at construction.
#[derive(Clone, PartialEq, Debug)]
pub struct SpdMatrix(Matrix);

impl SpdMatrix {
    /// Checks symmetry (`1e-12` relative), symmetrizes and certifies
    /// positive definiteness.
    pub fn new(m: Matrix) -> Result<Self, LinalgError> {
        if !m.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        if !m.is_symmetric(1e-12) {
            return Err(LinalgError::NotSymmetric);
        }
        let m = m.symmetrized();
        cholesky(&m)?;
        Ok(Self(m))
    }

    /// Wraps an already symmetric matrix after symmetrizing it, still
    /// certifying definiteness. For iterates whose asymmetry is roundoff.
    pub fn from_symmetric_part(m: &Matrix) -> Result<Self, LinalgError> {
        if !m.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let m = m.symmetrized();
        cholesky(&m)?;
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn log_det(&self) -> f64 {
        log_det(&self.0).expect("certified positive definite")
    }

    /// Multiplication by a positive scalar keeps definiteness.
    pub fn scaled(&self, t: f64) -> Self {
        assert!(t > 0.0 && t.is_finite());
        Self(self.0.scaled(t))
    }
}

impl std::ops::Deref for SpdMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

/// Lower-triangular `L` with `L·Lᵀ = (S + Sᵀ)/2`.
pub fn cholesky(s: &Matrix) -> Result<Matrix, LinalgError> {
    if !s.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", s.rows, s.cols),
        });
    }
    if !s.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = s.rows;
    let a = s.symmetrized();
    let max_diag = (0..n).map(|i| a[(i, i)].abs()).fold(0.0, f64::max);
    let threshold = n as f64 * f64::EPSILON * max_diag;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for t in 0..j {
            d -= l[(j, t)] * l[(j, t)];
        }
        if d.is_nan() || d <= threshold {
            return Err(LinalgError::NotPositiveDefinite);
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut v = a[(i, j)];
            for t in 0..j {
                v -= l[(i, t)] * l[(j, t)];
            }
            l[(i, j)] = v / d;
        }
    }
    Ok(l)
}

pub fn log_det(s: &Matrix) -> Result<f64, LinalgError> {
    let l = cholesky(s)?;
    Ok(2.0 * (0..l.rows).map(|i| l[(i, i)].ln()).sum::<f64>())
}

pub fn spd_inverse(s: &Matrix) -> Result<Matrix, LinalgError> {
    let l = cholesky(s)?;
    let n = l.rows;
    // L⁻¹ by forward substitution, then S⁻¹ = L⁻ᵀ L⁻¹.
    let mut linv = Matrix::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut v = if i == col { 1.0 } else { 0.0 };
            for t in col..i {
                v -= l[(i, t)] * linv[(t, col)];
            }
            linv[(i, col)] = v / l[(i, i)];
        }
    }
    Ok(linv.transpose().matmul(&linv).symmetrized())
}

/// Eigen-decomposition of a symmetric matrix: `S = V·diag(values)·Vᵀ`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub vectors: Matrix,
}

impl SymEigen {
    /// Rebuilds `V·diag(f(λ))·Vᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.values.len();
        let mut out = Matrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                if vi == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)];
                }
            }
        }
        out.symmetrized()
    }
}

/// Cyclic Jacobi eigensolver. Input is symmetrized first; sweeps stop once
/// the off-diagonal Frobenius norm falls below `1e-13·‖S‖_F`.
pub fn sym_eigen(s: &Matrix) -> SymEigen {
    let n = s.rows;
    let mut a = s.symmetrized();
    let mut v = Matrix::identity(n);
    let norm = a.frobenius_norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_TOL * norm || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    SymEigen { values: (0..n).map(|i| a[(i, i)]).collect(), vectors: v }
}

/// Symmetric `R` with `R·S·R = I`.
pub fn inv_sqrt(s: &Matrix) -> Result<Matrix, LinalgError> {
    cholesky(s)?;
    let eig = sym_eigen(s);
    if eig.values.iter().any(|&l| l <= 0.0) {
        return Err(LinalgError::NotPositiveDefinite);
    }
    Ok(eig.map(|l| 1.0 / l.sqrt()))
}

pub fn spd_sqrt(s: &Matrix) -> Result<Matrix, LinalgError> {
    cholesky(s)?;
    Ok(sym_eigen(s).map(|l| l.max(0.0).sqrt()))
}

/// Principal matrix logarithm of an SPD matrix.
pub fn spd_log(s: &Matrix) -> Result<Matrix, LinalgError> {
    cholesky(s)?;
    let eig = sym_eigen(s);
    if eig.values.iter().any(|&l| l <= 0.0) {
        return Err(LinalgError::NotPositiveDefinite);
    }
    Ok(eig.map(f64::ln))
}

/// Matrix exponential of a symmetric matrix.
pub fn sym_exp(s: &Matrix) -> Matrix {
    sym_eigen(s).map(f64::exp)
}

/// Singular values and right singular vectors from one-sided Jacobi.
#[derive(Debug, Clone)]
pub struct SingularSystem {
    /// One value per column of the input, unsorted.
    pub values: Vec<f64>,
    /// `M·right = left·diag(values)`; left columns with zero value are zero.
    pub left: Matrix,
    /// Orthogonal, columns paired with `values`.
    pub right: Matrix,
}

impl SingularSystem {
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    fn cutoff(&self, tol: f64) -> f64 {
        tol * self.max_value()
    }
}

/// One-sided Jacobi: orthogonalizes the columns of `M` by plane rotations,
/// which is Jacobi's method applied implicitly to `MᵀM`.
pub fn singular_system(m: &Matrix) -> SingularSystem {
    let (rows, cols) = m.shape();
    let mut u = m.clone();
    let mut v = Matrix::identity(cols);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    alpha += up * up;
                    beta += uq * uq;
                    gamma += up * uq;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
                for i in 0..cols {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let values: Vec<f64> = (0..cols).map(|j| (0..rows).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt()).collect();
    let mut left = Matrix::zeros(rows, cols);
    for (j, &sv) in values.iter().enumerate() {
        if sv > 0.0 {
            for i in 0..rows {
                left[(i, j)] = u[(i, j)] / sv;
            }
        }
    }
    SingularSystem { values, left, right: v }
}

/// Number of singular values above `tol · σ_max`.
pub fn rank(m: &Matrix, tol: f64) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let sys = singular_system(m);
    let cutoff = sys.cutoff(tol);
    if sys.max_value() == 0.0 {
        return 0;
    }
    sys.values.iter().filter(|&&s| s > cutoff).count()
}

/// Number of singular values above `tol · scale`.
pub fn rank_scaled(m: &Matrix, tol: f64, scale: f64) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    singular_system(m).values.iter().filter(|&&s| s > tol * scale).count()
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn null_space(m: &Matrix, tol: f64) -> Matrix {
    let cols = m.cols;
    if m.rows == 0 || m.is_zero() {
        return Matrix::identity(cols);
    }
    let sys = singular_system(m);
    let cutoff = sys.cutoff(tol);
    let kept: Vec<Vec<f64>> = (0..cols).filter(|&j| sys.values[j] <= cutoff).map(|j| sys.right.column(j)).collect();
    Matrix::from_columns(cols, &kept)
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &Matrix, tol: f64) -> Matrix {
    let rows = m.rows;
    if m.cols == 0 || m.is_zero() {
        return Matrix::zeros(rows, 0);
    }
    let sys = singular_system(m);
    let cutoff = sys.cutoff(tol);
    let kept: Vec<Vec<f64>> = (0..m.cols).filter(|&j| sys.values[j] > cutoff).map(|j| sys.left.column(j)).collect();
    orthonormalize(&Matrix::from_columns(rows, &kept), tol)
}

/// Modified Gram-Schmidt with one re-orthogonalization pass; columns that
/// become negligible relative to the largest input column are dropped.
pub fn orthonormalize(m: &Matrix, tol: f64) -> Matrix {
    let rows = m.rows;
    let scale = (0..m.cols).map(|j| m.column(j).iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for j in 0..m.cols {
        let mut v = m.column(j);
        for _ in 0..2 {
            for b in &basis {
                let proj: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > tol.max(1e-8) * scale && norm > 0.0 {
            basis.push(v.iter().map(|x| x / norm).collect());
        }
    }
    Matrix::from_columns(rows, &basis)
}

/// LU factorization with partial pivoting, `P·A = L·U` packed in one matrix.
struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

fn lu(a: &Matrix) -> Result<Lu, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows, a.cols),
        });
    }
    let n = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = a.max_abs();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs())).unwrap();
        if lu[(piv, k)].abs() <= n as f64 * f64::EPSILON * scale || lu[(piv, k)] == 0.0 {
            return Err(LinalgError::Singular);
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
            perm.swap(k, piv);
            sign = -sign;
        }
        for i in (k + 1)..n {
            let f = lu[(i, k)] / lu[(k, k)];
            lu[(i, k)] = f;
            for j in (k + 1)..n {
                lu[(i, j)] -= f * lu[(k, j)];
            }
        }
    }
    Ok(Lu { lu, perm, sign })
}

/// `(sign, log|det|)` of a general square matrix.
pub fn sign_log_det(a: &Matrix) -> Result<(f64, f64), LinalgError> {
    let f = lu(a)?;
    let mut sign = f.sign;
    let mut logabs = 0.0;
    for i in 0..a.rows {
        let d = f.lu[(i, i)];
        sign *= d.signum();
        logabs += d.abs().ln();
    }
    Ok((sign, logabs))
}

/// Inverse of a general square matrix.
pub fn inverse(a: &Matrix) -> Result<Matrix, LinalgError> {
    let f = lu(a)?;
    let n = a.rows;
    let mut inv = Matrix::zeros(n, n);
    for col in 0..n {
        let mut x: Vec<f64> = (0..n).map(|i| if f.perm[i] == col { 1.0 } else { 0.0 }).collect();
        for i in 0..n {
            for t in 0..i {
                x[i] -= f.lu[(i, t)] * x[t];
            }
        }
        for i in (0..n).rev() {
            for t in (i + 1)..n {
                x[i] -= f.lu[(i, t)] * x[t];
            }
            x[i] /= f.lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, col)] = x[i];
        }
    }
    Ok(inv)
}
