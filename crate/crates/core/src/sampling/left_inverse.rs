use num_complex::Complex64;

use super::design::{SampleSet, SamplingDesign};
use super::SamplingError;
use crate::covariance::inner;
use crate::linalg::{CMatrix, CVector};
use crate::tolerance;

/// A left inverse of `R_{b,a}` adapted to the group structure.
///
/// `structured` (`S~`, `|G| x N*ell`) has column `(j, n)` equal to the left
/// translate by `tau_n` of column `(j, 0)`, and row block `i` built from the
/// seed's columns through the multiplication table of `K`. The
/// reconstruction vectors are `c_j = T(S~ column (j, 0))`.
#[derive(Debug, Clone)]
pub struct GCompatibleLeftInverse {
    seed: CMatrix,
    structured: CMatrix,
    recon_vectors: Vec<CVector>,
}

impl GCompatibleLeftInverse {
    /// `S`, `|H| x N*ell`, with `S R_{b,a} = [I 0]`.
    pub fn seed(&self) -> &CMatrix {
        &self.seed
    }

    /// `S~`, `|G| x N*ell`.
    pub fn structured(&self) -> &CMatrix {
        &self.structured
    }

    /// `c_1 .. c_N`.
    pub fn recon_vectors(&self) -> &[CVector] {
        &self.recon_vectors
    }

    /// Column of `S~` for system `j` and sampling point `n`.
    pub fn column(&self, design: &SamplingDesign, j: usize, n: usize) -> CVector {
        self.structured.column(j * design.ell() + n).into_owned()
    }
}

fn seed_target(h_order: usize, order: usize) -> CMatrix {
    CMatrix::from_fn(h_order, order, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

/// Row block `i`, column `(j, n)` of `S~` is `S_j^k` where
/// `tau_i tau_n = tau_k`.
fn structure(design: &SamplingDesign, seed: &CMatrix) -> CMatrix {
    let (h, ell, systems) = (design.h_order(), design.ell(), design.n_systems());
    let t = design.transversal();
    let mut out = CMatrix::zeros(design.order(), systems * ell);
    for j in 0..systems {
        for i in 0..ell {
            for n in 0..ell {
                let k = t.product_index(i, n);
                out.view_mut((i * h, j * ell + n), (h, 1))
                    .copy_from(&seed.column(j * ell + k));
            }
        }
    }
    out
}

fn assemble(design: &SamplingDesign, seed: CMatrix) -> GCompatibleLeftInverse {
    let structured = structure(design, &seed);
    let orbit = design.subspace().orbit();
    let ell = design.ell();
    let recon_vectors = (0..design.n_systems())
        .map(|j| orbit * structured.column(j * ell))
        .collect();
    GCompatibleLeftInverse { seed, structured, recon_vectors }
}

/// Builds `S~` from `seed` (default: the first `|H|` rows of `R^+`) and
/// checks both defining equations.
pub fn g_compatible_left_inverse(
    design: &SamplingDesign,
    seed: Option<&CMatrix>,
) -> Result<GCompatibleLeftInverse, SamplingError> {
    design.require_recoverable()?;
    let (h, order, cols) = (design.h_order(), design.order(), design.stacked().nrows());
    let target = seed_target(h, order);
    let seed = match seed {
        Some(s) => {
            if s.shape() != (h, cols) {
                return Err(SamplingError::Shape { what: "seed", expected: (h, cols), got: s.shape() });
            }
            let residual = (s * design.stacked() - &target).norm();
            if residual > tolerance::SEED_CHECK {
                return Err(SamplingError::SeedInvalid { residual });
            }
            s.clone()
        }
        None => design.pseudoinverse().rows(0, h).into_owned(),
    };
    let seed_residual = (&seed * design.stacked() - &target).norm();
    let inv = assemble(design, seed);
    let residual = design.left_inverse_residual(&inv.structured);
    if residual > tolerance::LEFT_INVERSE || seed_residual > tolerance::SEED_CHECK {
        return Err(SamplingError::LeftInverseCheck { residual: residual.max(seed_residual) });
    }
    Ok(inv)
}

/// The `c_j` the structured construction produces from the Moore-Penrose
/// seed, without requiring full rank. For a recoverable design these equal
/// the default [`g_compatible_left_inverse`] vectors; otherwise they are the
/// natural candidates whose failure the equivalence check observes.
pub fn candidate_reconstruction_vectors(design: &SamplingDesign) -> Vec<CVector> {
    let seed = design.pseudoinverse().rows(0, design.h_order()).into_owned();
    assemble(design, seed).recon_vectors
}

pub(crate) fn expand(design: &SamplingDesign, recon: &[CVector], samples: &SampleSet) -> CVector {
    let rep = design.subspace().rep();
    let mut x = CVector::zeros(rep.dim());
    for (j, c) in recon.iter().enumerate() {
        for n in 0..design.ell() {
            x += rep.apply(design.transversal().tau(n), c) * samples.get(j, n);
        }
    }
    x
}

fn check_samples(design: &SamplingDesign, samples: &SampleSet) -> Result<(), SamplingError> {
    if samples.systems() != design.n_systems() || samples.ell() != design.ell() {
        return Err(SamplingError::Shape {
            what: "sample set",
            expected: (design.n_systems(), design.ell()),
            got: (samples.systems(), samples.ell()),
        });
    }
    Ok(())
}

/// `x = sum_j sum_n L_j x(tau_n) U(tau_n) c_j`.
pub fn reconstruct(
    design: &SamplingDesign,
    inv: &GCompatibleLeftInverse,
    samples: &SampleSet,
) -> Result<CVector, SamplingError> {
    check_samples(design, samples)?;
    Ok(expand(design, &inv.recon_vectors, samples))
}

/// Largest `|L_j c_j'(tau_n) - delta_{j,j'} delta_{n,0}|`; basis case only.
pub fn interpolation_deviation(
    design: &SamplingDesign,
    inv: &GCompatibleLeftInverse,
) -> Result<f64, SamplingError> {
    if design.n_systems() != design.h_order() {
        return Err(SamplingError::NotBasisCase { systems: design.n_systems(), h_order: design.h_order() });
    }
    let rep = design.subspace().rep();
    let mut worst: f64 = 0.0;
    for (j, b) in design.systems().iter().enumerate() {
        for n in 0..design.ell() {
            let probe = rep.apply(design.transversal().tau(n), b);
            for (jp, c) in inv.recon_vectors.iter().enumerate() {
                let expected = if j == jp && n == 0 { 1.0 } else { 0.0 };
                worst = worst.max((inner(&probe, c) - Complex64::new(expected, 0.0)).norm());
            }
        }
    }
    Ok(worst)
}

/// `L_j c_j'(tau_n) = delta_{j,j'} delta_{n,0}` to `INTERPOLATION`.
pub fn verify_interpolation(
    design: &SamplingDesign,
    inv: &GCompatibleLeftInverse,
) -> Result<bool, SamplingError> {
    Ok(interpolation_deviation(design, inv)? <= tolerance::INTERPOLATION)
}
