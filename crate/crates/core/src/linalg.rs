//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra` types. The SVD is delegated to `faer`, whose
//! complex SVD stays accurate on rank-deficient input; it drives rank
//! decisions, the pseudoinverse and least squares. The Hermitian
//! eigendecomposition drives time evolution.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

use crate::tolerance;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("decomposition did not converge")]
    NoConvergence,
}

/// Thin singular value decomposition `M = U diag(s) V*`.
///
/// `left` is `m x k`, `right` is `n x k` with `k = min(m, n)`; both have
/// orthonormal columns. Singular values are descending.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: CMatrix,
    pub singular_values: Vec<f64>,
    pub right: CMatrix,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self) -> usize {
        numerical_rank(&self.singular_values, self.left.nrows(), self.right.nrows())
    }

    /// `U diag(s) V*`.
    pub fn reassemble(&self) -> CMatrix {
        let mut scaled = self.left.clone();
        for (k, s) in self.singular_values.iter().enumerate() {
            scaled.column_mut(k).scale_mut(*s);
        }
        scaled * self.right.adjoint()
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_finite(m: &CMatrix) -> Result<(), LinalgError> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

pub fn svd(m: &CMatrix) -> Result<SvdResult, LinalgError> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Ok(SvdResult {
            left: CMatrix::zeros(rows, 0),
            singular_values: Vec::new(),
            right: CMatrix::zeros(cols, 0),
        });
    }
    let fm = faer::Mat::<Complex64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let dec = fm.thin_svd().map_err(|_| LinalgError::NoConvergence)?;
    let to_nalgebra = |v: faer::MatRef<'_, Complex64>| CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]);
    let sigma = dec.S().column_vector();
    Ok(SvdResult {
        left: to_nalgebra(dec.U()),
        singular_values: (0..k).map(|i| sigma[i].re).collect(),
        right: to_nalgebra(dec.V()),
    })
}

/// Number of singular values above `max(m, n) * eps * sigma_max`.
pub fn numerical_rank(singular_values: &[f64], rows: usize, cols: usize) -> usize {
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    if sigma_max <= 0.0 {
        return 0;
    }
    let cutoff = tolerance::rank_cutoff(rows, cols, sigma_max);
    singular_values.iter().filter(|&&s| s > cutoff).count()
}

/// Moore-Penrose pseudoinverse from the SVD, dropping singular values under
/// the rank cutoff.
pub fn pseudoinverse(m: &CMatrix) -> Result<CMatrix, LinalgError> {
    let dec = svd(m)?;
    Ok(pseudoinverse_from_svd(&dec, m.nrows(), m.ncols()))
}

pub(crate) fn pseudoinverse_from_svd(dec: &SvdResult, rows: usize, cols: usize) -> CMatrix {
    let rank = dec.rank();
    let mut out = CMatrix::zeros(cols, rows);
    for k in 0..rank {
        let inv = 1.0 / dec.singular_values[k];
        let v = dec.right.column(k);
        let u = dec.left.column(k);
        out += (v * u.adjoint()).scale(inv);
    }
    out
}

/// Minimum-norm least-squares solution of `M x = y`.
pub fn least_squares_solve(m: &CMatrix, y: &CVector) -> Result<CVector, LinalgError> {
    if y.len() != m.nrows() {
        return Err(LinalgError::Shape {
            expected: format!("right-hand side of length {}", m.nrows()),
            got: format!("length {}", y.len()),
        });
    }
    Ok(pseudoinverse(m)? * y)
}

/// Largest entrywise modulus of `M - M*`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Frobenius distance from `Q* Q` to the identity.
pub fn unitarity_defect(q: &CMatrix) -> f64 {
    if !q.is_square() {
        return f64::INFINITY;
    }
    (q.adjoint() * q - CMatrix::identity(q.nrows(), q.ncols())).norm()
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues and a unitary
/// matrix of eigenvectors.
pub fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix), LinalgError> {
    check_finite(h)?;
    let deviation = hermitian_deviation(h);
    if deviation > tolerance::HERMITIAN_INPUT {
        return Err(LinalgError::NotHermitian { deviation });
    }
    if h.nrows() == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let dec = SymmetricEigen::try_new(h.clone(), tolerance::EPS, 0).ok_or(LinalgError::NoConvergence)?;
    Ok((dec.eigenvalues.iter().copied().collect(), dec.eigenvectors))
}

/// `exp(-i t H)` through the eigendecomposition `H = V diag(lambda) V*`.
pub fn hermitian_propagator(h: &CMatrix, t: f64) -> Result<CMatrix, LinalgError> {
    let (values, vectors) = hermitian_eigen(h)?;
    if t == 0.0 {
        return Ok(CMatrix::identity(h.nrows(), h.ncols()));
    }
    let mut scaled = vectors.clone();
    for (k, lambda) in values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -t * lambda);
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    Ok(scaled * vectors.adjoint())
}
