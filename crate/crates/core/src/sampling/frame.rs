use super::SamplingError;
use crate::linalg::{self, CMatrix, CVector};
use crate::tolerance;

/// Optimal frame bounds `A ||x||^2 <= sum_k |<v_k, x>|^2 <= B ||x||^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    /// Dimension of the space the bounds refer to.
    pub dim: usize,
    spanning: bool,
}

impl FrameBounds {
    /// `A > 0` up to the rank cutoff of the synthesis matrix.
    pub fn is_frame(&self) -> bool {
        self.spanning
    }
}

/// Bounds over the whole coordinate space `C^d` the vectors live in:
/// extreme eigenvalues of the frame operator `sum_k v_k v_k^*`.
pub fn frame_bounds(vectors: &[CVector]) -> Result<FrameBounds, SamplingError> {
    let first = vectors.first().ok_or(SamplingError::EmptyFrame)?;
    let dim = first.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(SamplingError::DimensionMismatch { expected: dim, got: v.len() });
    }
    let synthesis = CMatrix::from_columns(vectors);
    let svd = linalg::svd(&synthesis)?;
    let sigma_max = svd.sigma_max();
    let sigma_min = if svd.singular_values.len() >= dim { svd.singular_values[dim - 1] } else { 0.0 };
    let cutoff = tolerance::rank_cutoff(dim, vectors.len(), sigma_max);
    Ok(FrameBounds {
        lower: sigma_min * sigma_min,
        upper: sigma_max * sigma_max,
        dim,
        spanning: dim > 0 && sigma_min > cutoff,
    })
}

/// Bounds relative to the subspace spanned by the orthonormal columns of
/// `basis`; vectors are first expressed in that basis.
pub fn frame_bounds_in(vectors: &[CVector], basis: &CMatrix) -> Result<FrameBounds, SamplingError> {
    if vectors.is_empty() {
        return Err(SamplingError::EmptyFrame);
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != basis.nrows()) {
        return Err(SamplingError::DimensionMismatch { expected: basis.nrows(), got: v.len() });
    }
    let adj = basis.adjoint();
    let coords: Vec<CVector> = vectors.iter().map(|v| &adj * v).collect();
    frame_bounds(&coords)
}
