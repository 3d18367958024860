//! Sampling and perfect reconstruction of vectors living in cyclic invariant
//! subspaces of unitary representations of finite groups.
//!
//! A state `x` in the span of the orbit `{U(g) a : g in G}` is measured
//! against group-translated system vectors `U(tau_n) b_j`, where the `tau_n`
//! run over an Abelian subgroup `K` admitting a complement `H`. When the
//! stacked cross-covariance matrix has full column rank, the crate builds a
//! left inverse whose columns are left translates of `N` seed columns, so that
//!
//! ```text
//! x = sum_j sum_n L_j x(tau_n) U(tau_n) c_j
//! ```
//!
//! with reconstruction vectors `c_j` computed once per design.
//!
//! Module map:
//!
//! * [`group`]: Cayley-table groups, subgroups, complements, transversals and
//!   the canonical element ordering used by every matrix in the crate.
//! * [`representation`]: unitary representations and their verification.
//! * [`covariance`]: covariance functions, the cyclic subspace and the
//!   synthesis isomorphism from `L2(G)`.
//! * [`sampling`]: designs, recoverability, left inverses, reconstruction,
//!   frame bounds and dynamics.
//! * [`linalg`]: dense complex SVD, pseudoinverse, least squares and the
//!   Hermitian propagator.
//! * [`tolerance`]: every numerical threshold in one place.

pub mod covariance;
pub mod group;
pub mod linalg;
pub mod representation;
pub mod sampling;
pub mod tolerance;

pub use covariance::{
    auto_covariance, check_stationarity, cross_covariance, CoefficientVector, CovarianceError,
    CyclicSubspace,
};
pub use group::{
    CanonicalOrdering, Element, FiniteGroup, GroupError, Subgroup, Transversal,
};
pub use linalg::{CMatrix, CVector, LinalgError, SvdResult};
pub use representation::{RepError, UnitaryRep};
pub use sampling::{
    CommutantHamiltonian, FrameBounds, GCompatibleLeftInverse, Recoverability, SampleSet,
    SamplingDesign, SamplingError,
};

pub use num_complex::Complex64;
