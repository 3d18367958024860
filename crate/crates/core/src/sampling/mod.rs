//! Generalized sampling in a cyclic subspace.
//!
//! A [`SamplingDesign`] fixes the generator `a`, the systems `b_1..b_N` and
//! the transversal `K = {tau_n}`, and assembles the `N*ell x |G|` matrix
//! `R_{b,a}` of cross-covariances. Samples of `x = T(alpha)` satisfy
//! `samples = R_{b,a} alpha`, so any left inverse of `R_{b,a}` recovers
//! `alpha`. The [`GCompatibleLeftInverse`] is the left inverse whose columns
//! are left translates of `N` seed columns, which is what turns coefficient
//! recovery into the expansion `x = sum L_j x(tau_n) U(tau_n) c_j`.

mod design;
mod dynamics;
mod frame;
mod left_inverse;
mod theorem;

use thiserror::Error;

use crate::covariance::CovarianceError;
use crate::linalg::LinalgError;

pub use design::{build_design, Recoverability, SampleSet, SamplingDesign};
pub use dynamics::{propagate, sample_dynamics, symmetrize_hamiltonian, CommutantHamiltonian};
pub use frame::{frame_bounds, frame_bounds_in, FrameBounds};
pub use left_inverse::{
    candidate_reconstruction_vectors, g_compatible_left_inverse, interpolation_deviation,
    reconstruct, verify_interpolation, GCompatibleLeftInverse,
};
pub use theorem::{evaluate_theorem, TheoremConditions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("vector has dimension {got}, representation has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("at least one system vector is required")]
    EmptySystems,
    #[error("generator orbit is linearly dependent; sampling needs an independent orbit")]
    DependentOrbit,
    #[error("subspace ordering does not match the transversal's canonical ordering")]
    OrderingMismatch,
    #[error("design is not recoverable: rank {rank} < |G| = {order}")]
    NotRecoverable { rank: usize, order: usize },
    #[error("{what} has shape {got:?}, expected {expected:?}")]
    Shape { what: &'static str, expected: (usize, usize), got: (usize, usize) },
    #[error("seed does not satisfy S R = [I 0] (residual {residual:.3e})")]
    SeedInvalid { residual: f64 },
    #[error("structured left inverse check failed (residual {residual:.3e})")]
    LeftInverseCheck { residual: f64 },
    #[error("interpolation needs N = |H| (N = {systems}, |H| = {h_order})")]
    NotBasisCase { systems: usize, h_order: usize },
    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("Hamiltonian does not commute with the representation (norm {norm:.3e} > {bound:.3e})")]
    NonCommuting { norm: f64, bound: f64 },
    #[error("frame needs at least one vector")]
    EmptyFrame,
    #[error(transparent)]
    Covariance(#[from] CovarianceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
