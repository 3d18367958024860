//! The four equivalent characterisations of a recoverable design, each
//! evaluated independently so that their agreement can be checked.

use super::design::SamplingDesign;
use super::frame::frame_bounds_in;
use super::left_inverse::{candidate_reconstruction_vectors, expand, g_compatible_left_inverse};
use super::SamplingError;
use crate::linalg::CVector;
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremConditions {
    /// `rank R_{b,a} = |G|`.
    pub rank_full: bool,
    /// The structured left inverse exists and passes its check.
    pub inverse_ok: bool,
    /// The expansion reproduces every probe in `A_a`.
    pub expansion_exact: bool,
    /// `{U(tau_n) c_j}` is a frame for `A_a`.
    pub frame_ok: bool,
}

impl TheoremConditions {
    pub fn all_agree(&self) -> bool {
        let v = [self.rank_full, self.inverse_ok, self.expansion_exact, self.frame_ok];
        v.iter().all(|&b| b == v[0])
    }
}

/// Evaluates every condition on `design`. The expansion and frame checks use
/// the candidate `c_j` from the Moore-Penrose seed, which exist at any rank.
/// With no probes, the orbit vectors `U(g) a` are used.
pub fn evaluate_theorem(design: &SamplingDesign, probes: &[CVector]) -> Result<TheoremConditions, SamplingError> {
    let sub = design.subspace();
    let dim = sub.rep().dim();
    if let Some(p) = probes.iter().find(|p| p.len() != dim) {
        return Err(SamplingError::DimensionMismatch { expected: dim, got: p.len() });
    }
    let orbit: Vec<CVector>;
    let probes = if probes.is_empty() {
        orbit = sub.orbit().column_iter().map(|c| c.into_owned()).collect();
        &orbit[..]
    } else {
        probes
    };

    let rank_full = design.is_recoverable();
    let inverse_ok = match g_compatible_left_inverse(design, None) {
        Ok(_) => true,
        Err(SamplingError::NotRecoverable { .. } | SamplingError::LeftInverseCheck { .. }) => false,
        Err(e) => return Err(e),
    };

    let recon = candidate_reconstruction_vectors(design);
    let mut expansion_exact = true;
    for x in probes {
        let samples = design.generalized_samples(x)?;
        let err = (expand(design, &recon, &samples) - x).norm();
        if err > tolerance::RECONSTRUCTION * x.norm().max(f64::MIN_POSITIVE) {
            expansion_exact = false;
            break;
        }
    }

    let rep = sub.rep();
    let translates: Vec<CVector> = recon
        .iter()
        .flat_map(|c| (0..design.ell()).map(move |n| rep.apply(design.transversal().tau(n), c)))
        .collect();
    let frame_ok = frame_bounds_in(&translates, sub.orthonormal_basis())?.is_frame();

    Ok(TheoremConditions { rank_full, inverse_ok, expansion_exact, frame_ok })
}
