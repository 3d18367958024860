//! Unitary representations `U: G -> U(d)` stored as one dense matrix per
//! group element.

use thiserror::Error;

use crate::group::{Element, FiniteGroup};
use crate::linalg::{unitarity_defect, CMatrix, CVector};
use crate::tolerance;
use num_complex::Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("expected one matrix per element ({expected}), got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("matrix for element {element} is {rows}x{cols}, expected {dim}x{dim}")]
    BadShape { element: Element, rows: usize, cols: usize, dim: usize },
    #[error("matrix for element {0} has a non-finite entry")]
    NonFinite(Element),
    #[error("U(e) differs from the identity by {deviation:.3e}")]
    WrongIdentity { deviation: f64 },
    #[error("U({element}) is not unitary (defect {deviation:.3e})")]
    NotUnitary { element: Element, deviation: f64 },
    #[error("U({g}) U({h}) != U({g}{h}) (deviation {deviation:.3e})")]
    NotHomomorphism { g: Element, h: Element, deviation: f64 },
    #[error("conjugating matrix is not a {dim}x{dim} unitary (defect {deviation:.3e})")]
    ConjugatorNotUnitary { dim: usize, deviation: f64 },
    #[error("representation dimension must be positive")]
    ZeroDimension,
}

/// Worst deviations observed while verifying a representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepDiagnostics {
    pub identity_deviation: f64,
    pub unitarity_defect: f64,
    pub homomorphism_defect: f64,
}

#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: FiniteGroup,
    dim: usize,
    matrices: Vec<CMatrix>,
}

impl UnitaryRep {
    /// Left regular representation on `C^{|G|}` with basis indexed by
    /// element index: `U(s) delta_h = delta_{sh}`.
    pub fn regular(group: &FiniteGroup) -> Self {
        let n = group.order();
        let matrices = (0..n)
            .map(|s| {
                let mut m = CMatrix::zeros(n, n);
                for h in 0..n {
                    m[(group.mul(s, h), h)] = Complex64::new(1.0, 0.0);
                }
                m
            })
            .collect();
        Self { group: group.clone(), dim: n, matrices }
    }

    /// Z_M acting on M-periodic signals by `(U(n) x)(m) = x(m - n)`.
    pub fn cyclic_shift(m: usize) -> Result<Self, crate::group::GroupError> {
        let group = FiniteGroup::cyclic(m)?;
        let matrices = (0..m)
            .map(|n| {
                let mut u = CMatrix::zeros(m, m);
                for j in 0..m {
                    u[((j + n) % m, j)] = Complex64::new(1.0, 0.0);
                }
                u
            })
            .collect();
        Ok(Self { group, dim: m, matrices })
    }

    /// Validates explicit matrices: identity, unitarity and the
    /// homomorphism law, each to `REP_CHECK * d`.
    pub fn from_matrices(group: &FiniteGroup, matrices: Vec<CMatrix>) -> Result<Self, RepError> {
        if matrices.len() != group.order() {
            return Err(RepError::CountMismatch { expected: group.order(), got: matrices.len() });
        }
        let dim = matrices[0].nrows();
        if dim == 0 {
            return Err(RepError::ZeroDimension);
        }
        for (element, m) in matrices.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(RepError::BadShape { element, rows: m.nrows(), cols: m.ncols(), dim });
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(RepError::NonFinite(element));
            }
        }
        let rep = Self { group: group.clone(), dim, matrices };
        rep.verify()?;
        Ok(rep)
    }

    /// Element-wise `Q U(g) Q*`.
    pub fn conjugate(&self, q: &CMatrix) -> Result<Self, RepError> {
        let deviation = unitarity_defect(q);
        if q.shape() != (self.dim, self.dim) || deviation > tolerance::UNITARY_INPUT {
            return Err(RepError::ConjugatorNotUnitary { dim: self.dim, deviation });
        }
        let q_adj = q.adjoint();
        let matrices = self.matrices.iter().map(|u| q * u * &q_adj).collect();
        let rep = Self { group: self.group.clone(), dim: self.dim, matrices };
        rep.verify()?;
        Ok(rep)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: Element) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// `U(g) v`.
    pub fn apply(&self, g: Element, v: &CVector) -> CVector {
        &self.matrices[g] * v
    }

    pub fn diagnostics(&self) -> RepDiagnostics {
        let e = self.group.identity();
        let eye = CMatrix::identity(self.dim, self.dim);
        let identity_deviation = (&self.matrices[e] - &eye).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let unitarity = self.matrices.iter().map(unitarity_defect).fold(0.0, f64::max);
        let mut homomorphism: f64 = 0.0;
        for g in 0..self.group.order() {
            for h in 0..self.group.order() {
                let lhs = &self.matrices[g] * &self.matrices[h];
                homomorphism = homomorphism.max((lhs - &self.matrices[self.group.mul(g, h)]).norm());
            }
        }
        RepDiagnostics {
            identity_deviation,
            unitarity_defect: unitarity,
            homomorphism_defect: homomorphism,
        }
    }

    /// Checks the three representation invariants, naming the first
    /// offending element or pair.
    pub fn verify(&self) -> Result<(), RepError> {
        let e = self.group.identity();
        let eye = CMatrix::identity(self.dim, self.dim);
        let deviation = (&self.matrices[e] - &eye).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if deviation > tolerance::REP_IDENTITY {
            return Err(RepError::WrongIdentity { deviation });
        }
        let bound = tolerance::REP_CHECK * self.dim as f64;
        for (element, u) in self.matrices.iter().enumerate() {
            let deviation = unitarity_defect(u);
            if deviation > bound {
                return Err(RepError::NotUnitary { element, deviation });
            }
        }
        for g in 0..self.group.order() {
            for h in 0..self.group.order() {
                let lhs = &self.matrices[g] * &self.matrices[h];
                let deviation = (lhs - &self.matrices[self.group.mul(g, h)]).norm();
                if deviation > bound {
                    return Err(RepError::NotHomomorphism { g, h, deviation });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn haar_like(n: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CMatrix::from_fn(n, n, |_, _| c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)));
        g.qr().q()
    }

    fn is_permutation_matrix(m: &CMatrix) -> bool {
        let n = m.nrows();
        let entries_ok = m.iter().all(|z| *z == c(0.0, 0.0) || *z == c(1.0, 0.0));
        let rows_ok = (0..n).all(|i| m.row(i).iter().filter(|z| z.re == 1.0).count() == 1);
        let cols_ok = (0..n).all(|j| m.column(j).iter().filter(|z| z.re == 1.0).count() == 1);
        entries_ok && rows_ok && cols_ok
    }

    #[test]
    fn regular_trivial_and_z2() {
        let rep = UnitaryRep::regular(&FiniteGroup::cyclic(1).unwrap());
        assert_eq!(rep.matrix(0), &CMatrix::identity(1, 1));
        let rep = UnitaryRep::regular(&FiniteGroup::cyclic(2).unwrap());
        let swap = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(rep.matrix(1), &swap);
    }

    #[test]
    fn regular_reps_are_valid_permutations() {
        for g in [FiniteGroup::dihedral(3).unwrap(), FiniteGroup::dihedral(5).unwrap(), FiniteGroup::cyclic(12).unwrap()] {
            let rep = UnitaryRep::regular(&g);
            rep.verify().unwrap();
            assert!(rep.matrices().iter().all(is_permutation_matrix));
        }
    }

    #[test]
    fn cyclic_shift_examples() {
        let rep = UnitaryRep::cyclic_shift(4).unwrap();
        let delta = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let shifted = rep.apply(1, &delta);
        assert_eq!(shifted[1], c(1.0, 0.0));
        assert_eq!(shifted.iter().filter(|z| z.norm() > 0.0).count(), 1);
        // U(1)^M = I
        let mut acc = CMatrix::identity(4, 4);
        for _ in 0..4 {
            acc = rep.matrix(1) * acc;
        }
        assert_eq!(acc, CMatrix::identity(4, 4));

        let rep = UnitaryRep::cyclic_shift(6).unwrap();
        assert_eq!(rep.matrix(2) * rep.matrix(5), *rep.matrix(1));
        rep.verify().unwrap();
    }

    #[test]
    fn explicit_matrices() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let sign = vec![CMatrix::identity(2, 2), CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]))];
        UnitaryRep::from_matrices(&z2, sign).unwrap();

        let bad = vec![CMatrix::identity(2, 2), CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]))];
        assert!(matches!(UnitaryRep::from_matrices(&z2, bad), Err(RepError::NotUnitary { element: 1, .. })));

        let z3 = FiniteGroup::cyclic(3).unwrap();
        let theta = 2.0 * std::f64::consts::PI / 3.0;
        let rot = |k: f64| {
            let (s, co) = (k * theta).sin_cos();
            CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
        };
        let rep = UnitaryRep::from_matrices(&z3, vec![CMatrix::identity(2, 2), rot(1.0), rot(2.0)]).unwrap();
        let cube = rep.matrix(1) * rep.matrix(1) * rep.matrix(1);
        assert!((cube - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn explicit_matrix_failures_are_named() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let neg = CMatrix::identity(2, 2).scale(-1.0);
        assert!(matches!(
            UnitaryRep::from_matrices(&z2, vec![neg.clone(), neg.clone()]),
            Err(RepError::WrongIdentity { .. })
        ));
        // unitary but U(1)^2 != I
        let i_diag = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.0, 1.0), c(1.0, 0.0)]));
        assert!(matches!(
            UnitaryRep::from_matrices(&z2, vec![CMatrix::identity(2, 2), i_diag]),
            Err(RepError::NotHomomorphism { g: 1, h: 1, .. })
        ));
        assert_eq!(
            UnitaryRep::from_matrices(&z2, vec![CMatrix::identity(2, 2)]).unwrap_err(),
            RepError::CountMismatch { expected: 2, got: 1 }
        );
        assert!(matches!(
            UnitaryRep::from_matrices(&z2, vec![CMatrix::identity(2, 2), CMatrix::identity(3, 3)]),
            Err(RepError::BadShape { element: 1, .. })
        ));
    }

    #[test]
    fn conjugation() {
        let g = FiniteGroup::dihedral(3).unwrap();
        let rep = UnitaryRep::regular(&g);
        let same = rep.conjugate(&CMatrix::identity(6, 6)).unwrap();
        assert_eq!(same.matrices(), rep.matrices());

        let z2 = FiniteGroup::cyclic(2).unwrap();
        let reg2 = UnitaryRep::regular(&z2);
        let swap = reg2.matrix(1).clone();
        reg2.conjugate(&swap).unwrap();

        let q = haar_like(6, 7);
        let conj = rep.conjugate(&q).unwrap();
        let diag = conj.diagnostics();
        assert!(diag.unitarity_defect < 1e-12 && diag.homomorphism_defect < 1e-12);

        let not_unitary = CMatrix::identity(6, 6).scale(2.0);
        assert!(matches!(rep.conjugate(&not_unitary), Err(RepError::ConjugatorNotUnitary { .. })));
    }
}
