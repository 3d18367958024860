//! Time evolution under a Hamiltonian that commutes with the representation.
//!
//! If `[U(g), H] = 0` then `exp(-itH) U(tau_n) c_j = U(tau_n) c_j(t)`, so the
//! samples taken at `t = 0` reconstruct `x(t)` from the evolved `c_j(t)`.

use super::design::{SampleSet, SamplingDesign};
use super::left_inverse::{expand, GCompatibleLeftInverse};
use super::SamplingError;
use crate::linalg::{self, hermitian_deviation, CMatrix, CVector, LinalgError};
use crate::representation::UnitaryRep;
use crate::tolerance;

/// Hermitian operator commuting with every `U(g)`.
#[derive(Debug, Clone)]
pub struct CommutantHamiltonian {
    matrix: CMatrix,
    commutator_norm: f64,
}

fn commutator_norm(rep: &UnitaryRep, h: &CMatrix) -> f64 {
    rep.matrices()
        .iter()
        .map(|u| (u * h - h * u).norm())
        .fold(0.0, f64::max)
}

fn check_hermitian(rep: &UnitaryRep, h: &CMatrix) -> Result<CMatrix, SamplingError> {
    let d = rep.dim();
    if h.shape() != (d, d) {
        return Err(SamplingError::Shape { what: "Hamiltonian", expected: (d, d), got: h.shape() });
    }
    let deviation = hermitian_deviation(h);
    if deviation > tolerance::HERMITIAN_INPUT {
        return Err(SamplingError::NotHermitian { deviation });
    }
    Ok((h + h.adjoint()).scale(0.5))
}

impl CommutantHamiltonian {
    /// Accepts an explicit operator, refusing it when it fails to commute with
    /// `rep` to `COMMUTATOR * d`.
    pub fn new(rep: &UnitaryRep, h: &CMatrix) -> Result<Self, SamplingError> {
        let matrix = check_hermitian(rep, h)?;
        let norm = commutator_norm(rep, &matrix);
        let bound = tolerance::COMMUTATOR * rep.dim() as f64;
        if norm > bound {
            return Err(SamplingError::NonCommuting { norm, bound });
        }
        Ok(Self { matrix, commutator_norm: norm })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `max_g ||[U(g), H]||_F` against the representation it was built for.
    pub fn commutator_norm(&self) -> f64 {
        self.commutator_norm
    }

    pub fn propagator(&self, t: f64) -> Result<CMatrix, LinalgError> {
        linalg::hermitian_propagator(&self.matrix, t)
    }
}

/// Group average `(1/|G|) sum_g U(g) H0 U(g)^*`, which lies in the commutant.
pub fn symmetrize_hamiltonian(rep: &UnitaryRep, h0: &CMatrix) -> Result<CommutantHamiltonian, SamplingError> {
    let h0 = check_hermitian(rep, h0)?;
    let mut avg = CMatrix::zeros(rep.dim(), rep.dim());
    for u in rep.matrices() {
        avg += u * &h0 * u.adjoint();
    }
    avg.scale_mut(1.0 / rep.matrices().len() as f64);
    let avg = (&avg + avg.adjoint()).scale(0.5);
    CommutantHamiltonian::new(rep, &avg)
}

/// `exp(-itH) x`.
pub fn propagate(h: &CommutantHamiltonian, t: f64, x: &CVector) -> Result<CVector, SamplingError> {
    if x.len() != h.matrix.nrows() {
        return Err(SamplingError::DimensionMismatch { expected: h.matrix.nrows(), got: x.len() });
    }
    Ok(h.propagator(t)? * x)
}

/// `x(t) = sum_j sum_n L_j x(tau_n) U(tau_n) c_j(t)` from samples taken at
/// time zero.
pub fn sample_dynamics(
    design: &SamplingDesign,
    inv: &GCompatibleLeftInverse,
    samples_at_t0: &SampleSet,
    h: &CommutantHamiltonian,
    t: f64,
) -> Result<CVector, SamplingError> {
    let rep = design.subspace().rep();
    if h.matrix.shape() != (rep.dim(), rep.dim()) {
        return Err(SamplingError::Shape { what: "Hamiltonian", expected: (rep.dim(), rep.dim()), got: h.matrix.shape() });
    }
    let norm = commutator_norm(rep, &h.matrix);
    let bound = tolerance::COMMUTATOR * rep.dim() as f64;
    if norm > bound {
        return Err(SamplingError::NonCommuting { norm, bound });
    }
    if samples_at_t0.systems() != design.n_systems() || samples_at_t0.ell() != design.ell() {
        return Err(SamplingError::Shape {
            what: "sample set",
            expected: (design.n_systems(), design.ell()),
            got: (samples_at_t0.systems(), samples_at_t0.ell()),
        });
    }
    let propagator = h.propagator(t)?;
    let evolved: Vec<CVector> = inv.recon_vectors().iter().map(|c| &propagator * c).collect();
    Ok(expand(design, &evolved, samples_at_t0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::CyclicSubspace;
    use crate::group::{CanonicalOrdering, FiniteGroup, Transversal};
    use crate::linalg::c;
    use crate::sampling::{g_compatible_left_inverse, reconstruct};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        let m = random_matrix(n, rng);
        (&m + m.adjoint()).scale(0.5)
    }

    fn d3_design(rng: &mut impl Rng) -> SamplingDesign {
        let g = FiniteGroup::dihedral(3).unwrap();
        let rep = UnitaryRep::regular(&g);
        let t = Transversal::new(&g, &g.generate(&[3]).unwrap(), &g.generate(&[1]).unwrap()).unwrap();
        let ord = CanonicalOrdering::new(&g, &t);
        let a = CVector::from_fn(6, |_, _| c(StandardNormal.sample(rng), StandardNormal.sample(rng)));
        let sub = CyclicSubspace::new(&rep, &a, &ord).unwrap();
        let systems: Vec<CVector> = (0..3)
            .map(|_| CVector::from_fn(6, |_, _| c(StandardNormal.sample(rng), StandardNormal.sample(rng))))
            .collect();
        SamplingDesign::new(&sub, &systems, &t).unwrap()
    }

    #[test]
    fn symmetrizing_identity_and_commuting_inputs() {
        let rep = UnitaryRep::regular(&FiniteGroup::dihedral(3).unwrap());
        let h = symmetrize_hamiltonian(&rep, &CMatrix::identity(6, 6)).unwrap();
        assert!((h.matrix() - CMatrix::identity(6, 6)).norm() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let commuting = symmetrize_hamiltonian(&rep, &random_hermitian(6, &mut rng)).unwrap();
        let again = symmetrize_hamiltonian(&rep, commuting.matrix()).unwrap();
        assert!((again.matrix() - commuting.matrix()).norm() < 1e-12);
    }

    #[test]
    fn symmetrized_random_hamiltonian_commutes() {
        let rep = UnitaryRep::regular(&FiniteGroup::dihedral(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = symmetrize_hamiltonian(&rep, &random_hermitian(6, &mut rng)).unwrap();
        assert!(h.commutator_norm() <= 1e-12);
        assert!(hermitian_deviation(h.matrix()) <= tolerance::HERMITIAN_OUTPUT);
    }

    #[test]
    fn non_hermitian_and_non_commuting_inputs_are_refused() {
        let rep = UnitaryRep::regular(&FiniteGroup::dihedral(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        assert!(matches!(
            symmetrize_hamiltonian(&rep, &random_matrix(6, &mut rng)),
            Err(SamplingError::NotHermitian { .. })
        ));
        assert!(matches!(
            CommutantHamiltonian::new(&rep, &random_hermitian(6, &mut rng)),
            Err(SamplingError::NonCommuting { .. })
        ));
    }

    #[test]
    fn dynamics_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let d = d3_design(&mut rng);
        let inv = g_compatible_left_inverse(&d, None).unwrap();
        let rep = d.subspace().rep();
        let x = d.subspace().orbit() * CVector::from_fn(6, |_, _| c(StandardNormal.sample(&mut rng), 0.0));
        let s = d.generalized_samples(&x).unwrap();
        let recon = reconstruct(&d, &inv, &s).unwrap();

        let h = symmetrize_hamiltonian(rep, &random_hermitian(6, &mut rng)).unwrap();
        let at_zero = sample_dynamics(&d, &inv, &s, &h, 0.0).unwrap();
        assert!((&at_zero - &recon).norm() < 1e-12);

        let scalar = CommutantHamiltonian::new(rep, &CMatrix::identity(6, 6)).unwrap();
        let t = 0.8;
        let phase = num_complex::Complex64::from_polar(1.0, -t);
        let evolved = sample_dynamics(&d, &inv, &s, &scalar, t).unwrap();
        assert!((evolved - &recon * phase).norm() < 1e-10);

        let evolved = sample_dynamics(&d, &inv, &s, &h, 1.0).unwrap();
        let direct = propagate(&h, 1.0, &x).unwrap();
        assert!((evolved - direct).norm() <= 1e-8 * x.norm());
    }
}
