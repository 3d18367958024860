use num_complex::Complex64;

use super::SamplingError;
use crate::covariance::{inner, CoefficientVector, CyclicSubspace};
use crate::group::{CanonicalOrdering, FiniteGroup, Transversal};
use crate::linalg::{self, CMatrix, CVector, SvdResult};
use crate::tolerance;

/// Generalized samples `L_j x(tau_n)`, stored j-major:
/// `L_1 x(tau_0) .. L_1 x(tau_{ell-1}), L_2 x(tau_0), ..`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    systems: usize,
    ell: usize,
    values: CVector,
}

impl SampleSet {
    pub fn new(systems: usize, ell: usize, values: CVector) -> Result<Self, SamplingError> {
        if values.len() != systems * ell {
            return Err(SamplingError::Shape {
                what: "sample vector",
                expected: (systems * ell, 1),
                got: (values.len(), 1),
            });
        }
        Ok(Self { systems, ell, values })
    }

    /// `L_j x(tau_n)` with zero-based `j`.
    pub fn get(&self, j: usize, n: usize) -> Complex64 {
        self.values[j * self.ell + n]
    }

    pub fn values(&self) -> &CVector {
        &self.values
    }

    pub fn systems(&self) -> usize {
        self.systems
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Rank test of `R_{b,a}` with conditioning diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recoverability {
    pub rank: usize,
    pub recoverable: bool,
    /// `sigma_{|G|}` of `R_{b,a}`, zero when `N*ell < |G|`.
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub cutoff: f64,
    /// Recoverable, but `sigma_min` within `ILL_CONDITIONED_RATIO` of the cutoff.
    pub ill_conditioned: bool,
}

/// Everything needed to sample and reconstruct in `A_a`.
#[derive(Debug, Clone)]
pub struct SamplingDesign {
    sub: CyclicSubspace,
    systems: Vec<CVector>,
    transversal: Transversal,
    blocks: Vec<CMatrix>,
    stacked: CMatrix,
    svd: SvdResult,
    recoverability: Recoverability,
}

pub fn build_design(
    sub: &CyclicSubspace,
    systems: &[CVector],
    transversal: &Transversal,
) -> Result<SamplingDesign, SamplingError> {
    SamplingDesign::new(sub, systems, transversal)
}

impl SamplingDesign {
    pub fn new(
        sub: &CyclicSubspace,
        systems: &[CVector],
        transversal: &Transversal,
    ) -> Result<Self, SamplingError> {
        if systems.is_empty() {
            return Err(SamplingError::EmptySystems);
        }
        let rep = sub.rep();
        if let Some(b) = systems.iter().find(|b| b.len() != rep.dim()) {
            return Err(SamplingError::DimensionMismatch { expected: rep.dim(), got: b.len() });
        }
        if !sub.is_independent() {
            return Err(SamplingError::DependentOrbit);
        }
        let group = rep.group();
        if transversal.k().order() * transversal.h().order() != group.order()
            || CanonicalOrdering::new(group, transversal) != *sub.ordering()
        {
            return Err(SamplingError::OrderingMismatch);
        }

        let order = group.order();
        let ell = transversal.ell();
        let ordering = sub.ordering();
        let a = sub.generator();
        // U(g) a for every element index g
        let orbit_by_element: Vec<CVector> = (0..order).map(|g| rep.apply(g, a)).collect();
        let blocks: Vec<CMatrix> = systems
            .iter()
            .map(|b| {
                let r: Vec<Complex64> = orbit_by_element.iter().map(|ua| inner(b, ua)).collect();
                CMatrix::from_fn(ell, order, |n, col| {
                    let s = ordering.order()[col];
                    r[group.mul(group.inv(transversal.tau(n)), s)]
                })
            })
            .collect();
        let mut stacked = CMatrix::zeros(systems.len() * ell, order);
        for (j, block) in blocks.iter().enumerate() {
            stacked.view_mut((j * ell, 0), (ell, order)).copy_from(block);
        }

        let svd = linalg::svd(&stacked)?;
        let rank = svd.rank();
        let sigma_max = svd.sigma_max();
        let sigma_min = if svd.singular_values.len() >= order {
            svd.singular_values[order - 1]
        } else {
            0.0
        };
        let cutoff = tolerance::rank_cutoff(stacked.nrows(), stacked.ncols(), sigma_max);
        let recoverable = rank == order;
        let recoverability = Recoverability {
            rank,
            recoverable,
            sigma_min,
            sigma_max,
            cutoff,
            ill_conditioned: recoverable && sigma_min <= tolerance::ILL_CONDITIONED_RATIO * cutoff,
        };

        Ok(Self {
            sub: sub.clone(),
            systems: systems.to_vec(),
            transversal: transversal.clone(),
            blocks,
            stacked,
            svd,
            recoverability,
        })
    }

    pub fn subspace(&self) -> &CyclicSubspace {
        &self.sub
    }

    pub fn group(&self) -> &FiniteGroup {
        self.sub.group()
    }

    pub fn ordering(&self) -> &CanonicalOrdering {
        self.sub.ordering()
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn systems(&self) -> &[CVector] {
        &self.systems
    }

    /// `N`.
    pub fn n_systems(&self) -> usize {
        self.systems.len()
    }

    pub fn ell(&self) -> usize {
        self.transversal.ell()
    }

    pub fn h_order(&self) -> usize {
        self.transversal.h().order()
    }

    pub fn order(&self) -> usize {
        self.group().order()
    }

    /// `R_{b_j,a}`, `ell x |G|`.
    pub fn block(&self, j: usize) -> &CMatrix {
        &self.blocks[j]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// `R_{b,a}`, `N*ell x |G|`.
    pub fn stacked(&self) -> &CMatrix {
        &self.stacked
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.svd.singular_values
    }

    pub fn check_recoverability(&self) -> Recoverability {
        self.recoverability
    }

    pub fn is_recoverable(&self) -> bool {
        self.recoverability.recoverable
    }

    pub(crate) fn require_recoverable(&self) -> Result<(), SamplingError> {
        if !self.is_recoverable() {
            return Err(SamplingError::NotRecoverable {
                rank: self.recoverability.rank,
                order: self.order(),
            });
        }
        Ok(())
    }

    /// `L_j x(tau_n) = <U(tau_n) b_j, x>`.
    pub fn generalized_samples(&self, x: &CVector) -> Result<SampleSet, SamplingError> {
        let rep = self.sub.rep();
        if x.len() != rep.dim() {
            return Err(SamplingError::DimensionMismatch { expected: rep.dim(), got: x.len() });
        }
        let ell = self.ell();
        let mut values = CVector::zeros(self.systems.len() * ell);
        for (j, b) in self.systems.iter().enumerate() {
            for n in 0..ell {
                values[j * ell + n] = inner(&rep.apply(self.transversal.tau(n), b), x);
            }
        }
        SampleSet::new(self.systems.len(), ell, values)
    }

    /// `G_{j,tau_n}`, the conjugated rows of `R_{b,a}`, so that
    /// `<G_{j,tau_n}, alpha> = L_j x(tau_n)` for `x = T(alpha)`.
    pub fn frame_vectors(&self) -> Vec<CoefficientVector> {
        self.stacked
            .row_iter()
            .map(|row| CoefficientVector::new(row.adjoint().into_owned()))
            .collect()
    }

    /// `R^+`, the Moore-Penrose left inverse, from the SVD.
    pub fn moore_penrose_left_inverse(&self) -> Result<CMatrix, SamplingError> {
        self.require_recoverable()?;
        Ok(self.pseudoinverse())
    }

    /// Pseudoinverse of `R_{b,a}` regardless of rank.
    pub(crate) fn pseudoinverse(&self) -> CMatrix {
        linalg::pseudoinverse_from_svd(&self.svd, self.stacked.nrows(), self.stacked.ncols())
    }

    /// `M = R^+ + U (I - R R^+)`; every left inverse of `R_{b,a}` has this form.
    pub fn left_inverse_family(&self, free: &CMatrix) -> Result<CMatrix, SamplingError> {
        self.require_recoverable()?;
        let (rows, cols) = (self.order(), self.stacked.nrows());
        if free.shape() != (rows, cols) {
            return Err(SamplingError::Shape { what: "free matrix", expected: (rows, cols), got: free.shape() });
        }
        let pinv = self.pseudoinverse();
        let complement = CMatrix::identity(cols, cols) - &self.stacked * &pinv;
        Ok(pinv + free * complement)
    }

    /// Frobenius distance of `M R_{b,a}` from the identity.
    pub fn left_inverse_residual(&self, m: &CMatrix) -> f64 {
        (m * &self.stacked - CMatrix::identity(self.order(), self.order())).norm()
    }
}
