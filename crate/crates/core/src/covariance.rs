//! Covariance functions and the cyclic invariant subspace `A_a`.
//!
//! The synthesis map `T(alpha) = sum_g alpha(g) U(g) a` identifies `L2(G)`
//! (coefficient vectors laid out in the canonical ordering) with `A_a`
//! whenever the orbit of `a` is linearly independent, and it intertwines the
//! left regular representation with `U`:
//! `T(L_s alpha) = U(s) T(alpha)`.

use log::warn;
use num_complex::Complex64;
use thiserror::Error;

use crate::group::{CanonicalOrdering, Element, FiniteGroup, GroupError};
use crate::linalg::{self, CMatrix, CVector, LinalgError};
use crate::representation::UnitaryRep;
use crate::tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CovarianceError {
    #[error("vector has dimension {got}, representation has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient vector has length {got}, group has order {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("generator is the zero vector")]
    ZeroGenerator,
    #[error("orbit of the generator is linearly dependent (rank {rank} < {order})")]
    DependentOrbit { rank: usize, order: usize },
    #[error("ordering covers {got} elements, group has order {expected}")]
    OrderingMismatch { expected: usize, got: usize },
    #[error("expected one vector per group element ({expected}), got {got}")]
    MissingElements { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `<u, v>`, conjugate-linear in `u`.
pub fn inner(u: &CVector, v: &CVector) -> Complex64 {
    u.dotc(v)
}

/// An element of `L2(G)`: one complex entry per group element, laid out in
/// the canonical ordering of the design it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(CVector);

impl CoefficientVector {
    pub fn new(entries: CVector) -> Self {
        Self(entries)
    }

    pub fn from_vec(entries: Vec<Complex64>) -> Self {
        Self(CVector::from_vec(entries))
    }

    /// Indicator of the group element at canonical position `position`.
    pub fn delta(len: usize, position: usize) -> Self {
        let mut v = CVector::zeros(len);
        v[position] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn into_inner(self) -> CVector {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `L_s alpha`, a pure permutation of entries.
    pub fn left_translate(
        &self,
        group: &FiniteGroup,
        s: Element,
        ordering: &CanonicalOrdering,
    ) -> Result<Self, GroupError> {
        let moved = ordering.left_translate(group, s, self.0.as_slice())?;
        Ok(Self::from_vec(moved))
    }
}

fn check_dim(rep: &UnitaryRep, v: &CVector) -> Result<(), CovarianceError> {
    if v.len() != rep.dim() {
        return Err(CovarianceError::DimensionMismatch { expected: rep.dim(), got: v.len() });
    }
    Ok(())
}

/// `R_a(g) = <a, U(g) a>`.
pub fn auto_covariance(rep: &UnitaryRep, a: &CVector, g: Element) -> Result<Complex64, CovarianceError> {
    cross_covariance(rep, a, a, g)
}

/// `R_{a,b}(g) = <a, U(g) b>`.
pub fn cross_covariance(
    rep: &UnitaryRep,
    a: &CVector,
    b: &CVector,
    g: Element,
) -> Result<Complex64, CovarianceError> {
    check_dim(rep, a)?;
    check_dim(rep, b)?;
    rep.group().check_element(g)?;
    Ok(inner(a, &rep.apply(g, b)))
}

/// Whether `<x_g, x_g'> = <x_{hg}, x_{hg'}>` for all `g, g', h`, to
/// `STATIONARITY`. `vectors` is indexed by element index.
pub fn check_stationarity(group: &FiniteGroup, vectors: &[CVector]) -> Result<bool, CovarianceError> {
    let n = group.order();
    if vectors.len() != n {
        return Err(CovarianceError::MissingElements { expected: n, got: vectors.len() });
    }
    let dim = vectors[0].len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(CovarianceError::DimensionMismatch { expected: dim, got: v.len() });
    }
    let gram = CMatrix::from_fn(n, n, |i, j| inner(&vectors[i], &vectors[j]));
    for h in 0..n {
        for g in 0..n {
            for g2 in 0..n {
                let shifted = gram[(group.mul(h, g), group.mul(h, g2))];
                if (gram[(g, g2)] - shifted).norm() > tolerance::STATIONARITY {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The span of `{U(g) a}` together with its orbit matrix and Gram matrix.
#[derive(Debug, Clone)]
pub struct CyclicSubspace {
    rep: UnitaryRep,
    generator: CVector,
    ordering: CanonicalOrdering,
    orbit: CMatrix,
    gram: CMatrix,
    gram_singular_values: Vec<f64>,
    orbit_rank: usize,
    basis: CMatrix,
    independent: bool,
}

impl CyclicSubspace {
    pub fn new(rep: &UnitaryRep, a: &CVector, ordering: &CanonicalOrdering) -> Result<Self, CovarianceError> {
        check_dim(rep, a)?;
        let n = rep.group().order();
        if ordering.len() != n {
            return Err(CovarianceError::OrderingMismatch { expected: n, got: ordering.len() });
        }
        if a.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(CovarianceError::ZeroGenerator);
        }
        let group = rep.group();
        let mut orbit = CMatrix::zeros(rep.dim(), n);
        for (col, &g) in ordering.order().iter().enumerate() {
            orbit.set_column(col, &rep.apply(g, a));
        }
        // gram[h][g] = R_a(h^{-1} g) with rows and columns in canonical order
        let auto: Vec<Complex64> = (0..n).map(|g| inner(a, &rep.apply(g, a))).collect();
        let gram = CMatrix::from_fn(n, n, |i, j| {
            let (h, g) = (ordering.order()[i], ordering.order()[j]);
            auto[group.mul(group.inv(h), g)]
        });

        let gram_svd = linalg::svd(&gram)?;
        let independent = gram_svd.rank() == n;
        let orbit_svd = linalg::svd(&orbit)?;
        let orbit_rank = orbit_svd.rank();
        let basis = orbit_svd.left.columns(0, orbit_rank).into_owned();
        Ok(Self {
            rep: rep.clone(),
            generator: a.clone(),
            ordering: ordering.clone(),
            orbit,
            gram,
            gram_singular_values: gram_svd.singular_values,
            orbit_rank,
            basis,
            independent,
        })
    }

    pub fn rep(&self) -> &UnitaryRep {
        &self.rep
    }

    pub fn group(&self) -> &FiniteGroup {
        self.rep.group()
    }

    pub fn generator(&self) -> &CVector {
        &self.generator
    }

    pub fn ordering(&self) -> &CanonicalOrdering {
        &self.ordering
    }

    /// `d x |G|`, column `i` is `U(order[i]) a`.
    pub fn orbit(&self) -> &CMatrix {
        &self.orbit
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn gram_singular_values(&self) -> &[f64] {
        &self.gram_singular_values
    }

    /// Smallest singular value of the Gram matrix.
    pub fn gram_sigma_min(&self) -> f64 {
        self.gram_singular_values.last().copied().unwrap_or(0.0)
    }

    /// Real part of `det R_a`; the Gram matrix is Hermitian PSD so this is
    /// non-negative up to rounding. Diagnostic only.
    pub fn gram_determinant(&self) -> f64 {
        self.gram.clone().determinant().re
    }

    /// Gram matrix nonsingular (smallest singular value above the rank cutoff).
    pub fn is_independent(&self) -> bool {
        self.independent
    }

    /// Numerical rank of the orbit matrix, i.e. `dim A_a`.
    pub fn orbit_rank(&self) -> usize {
        self.orbit_rank
    }

    /// Orthonormal basis of `A_a` as the columns of a `d x dim A_a` matrix.
    pub fn orthonormal_basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projection of `x` onto `A_a`.
    pub fn project(&self, x: &CVector) -> Result<CVector, CovarianceError> {
        check_dim(&self.rep, x)?;
        Ok(&self.basis * (self.basis.adjoint() * x))
    }

    fn require_independent(&self) -> Result<(), CovarianceError> {
        if !self.independent {
            return Err(CovarianceError::DependentOrbit {
                rank: self.orbit_rank,
                order: self.group().order(),
            });
        }
        Ok(())
    }

    fn check_len(&self, alpha: &CoefficientVector) -> Result<(), CovarianceError> {
        if alpha.len() != self.group().order() {
            return Err(CovarianceError::LengthMismatch { expected: self.group().order(), got: alpha.len() });
        }
        Ok(())
    }

    /// `T(alpha) = sum_g alpha(g) U(g) a`. Errors on a dependent orbit, where
    /// the map is not injective.
    pub fn synthesize(&self, alpha: &CoefficientVector) -> Result<CVector, CovarianceError> {
        self.require_independent()?;
        self.synthesize_unchecked(alpha)
    }

    /// [`synthesize`](Self::synthesize) without the independence gate.
    pub fn synthesize_unchecked(&self, alpha: &CoefficientVector) -> Result<CVector, CovarianceError> {
        self.check_len(alpha)?;
        Ok(&self.orbit * alpha.as_vector())
    }

    /// Coefficients of `x` with respect to the orbit, by least squares.
    pub fn analyze(&self, x: &CVector) -> Result<CoefficientVector, CovarianceError> {
        self.require_independent()?;
        self.analyze_min_norm(x)
    }

    /// Minimum-norm least-squares coefficients; warns when the orbit is
    /// dependent and the answer is one of many.
    pub fn analyze_min_norm(&self, x: &CVector) -> Result<CoefficientVector, CovarianceError> {
        check_dim(&self.rep, x)?;
        if !self.independent {
            warn!(
                "orbit is dependent (rank {} < {}); returning minimum-norm coefficients",
                self.orbit_rank,
                self.group().order()
            );
        }
        Ok(CoefficientVector::new(linalg::least_squares_solve(&self.orbit, x)?))
    }
}
