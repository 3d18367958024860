use finite_sampling::group::{left_cosets, Transversal};
use finite_sampling::linalg::{c, pseudoinverse};
use finite_sampling::sampling::{
    evaluate_theorem, frame_bounds, g_compatible_left_inverse, reconstruct,
};
use finite_sampling::{
    cross_covariance, CMatrix, CVector, CanonicalOrdering, CoefficientVector, CyclicSubspace,
    FiniteGroup, SamplingDesign, UnitaryRep,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn random_vector(n: usize, rng: &mut impl Rng) -> CVector {
    CVector::from_fn(n, |_, _| c(gaussian(rng), gaussian(rng)))
}

fn haar_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(gaussian(rng), gaussian(rng))).qr().q()
}

/// (group, K generators, H generators)
fn case(i: usize) -> (FiniteGroup, Vec<usize>, Vec<usize>) {
    match i % 6 {
        0 => (FiniteGroup::cyclic(6).unwrap(), vec![2], vec![3]),
        1 => (FiniteGroup::cyclic(12).unwrap(), vec![4], vec![3]),
        2 => (FiniteGroup::cyclic(8).unwrap(), vec![1], vec![]),
        3 => (FiniteGroup::dihedral(3).unwrap(), vec![3], vec![1]),
        4 => (FiniteGroup::dihedral(4).unwrap(), vec![4], vec![1]),
        _ => (FiniteGroup::dihedral(5).unwrap(), vec![5], vec![1]),
    }
}

struct Setup {
    rep: UnitaryRep,
    transversal: Transversal,
    ordering: CanonicalOrdering,
}

fn setup(i: usize, conjugated: bool, rng: &mut impl Rng) -> Setup {
    let (g, kg, hg) = case(i);
    let k = g.generate(&kg).unwrap();
    let h = g.generate(&hg).unwrap();
    let transversal = Transversal::new(&g, &k, &h).unwrap();
    let ordering = CanonicalOrdering::new(&g, &transversal);
    let mut rep = UnitaryRep::regular(&g);
    if conjugated {
        rep = rep.conjugate(&haar_unitary(g.order(), rng)).unwrap();
    }
    Setup { rep, transversal, ordering }
}

fn design(s: &Setup, n_systems: usize, rng: &mut impl Rng) -> SamplingDesign {
    let d = s.rep.dim();
    let a = random_vector(d, rng);
    let sub = CyclicSubspace::new(&s.rep, &a, &s.ordering).unwrap();
    let systems: Vec<CVector> = (0..n_systems).map(|_| random_vector(d, rng)).collect();
    SamplingDesign::new(&sub, &systems, &s.transversal).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cosets_partition_the_group(m in 1usize..30, gen in 0usize..30) {
        let g = FiniteGroup::cyclic(m).unwrap();
        let h = g.generate(&[gen % m]).unwrap();
        let cosets = left_cosets(&g, &h);
        let mut all: Vec<usize> = cosets.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..m).collect::<Vec<_>>());
        prop_assert!(cosets.iter().all(|c| c.len() == h.order()));
    }

    #[test]
    fn left_translation_is_a_norm_preserving_action(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, false, &mut rng);
        let g = s.rep.group();
        let alpha = CoefficientVector::new(random_vector(g.order(), &mut rng));
        let a = rng.random_range(0..g.order());
        let b = rng.random_range(0..g.order());
        let step = alpha.left_translate(g, b, &s.ordering).unwrap().left_translate(g, a, &s.ordering).unwrap();
        let direct = alpha.left_translate(g, g.mul(a, b), &s.ordering).unwrap();
        prop_assert_eq!(step.as_vector(), direct.as_vector());
        prop_assert!((direct.norm() - alpha.norm()).abs() <= 1e-12 * alpha.norm());
    }

    #[test]
    fn shifting_property(i in 0usize..6, conj in any::<bool>(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, conj, &mut rng);
        let g = s.rep.group();
        let sub = CyclicSubspace::new(&s.rep, &random_vector(g.order(), &mut rng), &s.ordering).unwrap();
        let alpha = CoefficientVector::new(random_vector(g.order(), &mut rng));
        let x = sub.synthesize(&alpha).unwrap();
        for e in 0..g.order() {
            let lhs = sub.synthesize(&alpha.left_translate(g, e, &s.ordering).unwrap()).unwrap();
            let rhs = s.rep.apply(e, &x);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * alpha.norm());
        }
    }

    #[test]
    fn gram_matches_orbit_products(i in 0usize..6, conj in any::<bool>(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, conj, &mut rng);
        let sub = CyclicSubspace::new(&s.rep, &random_vector(s.rep.dim(), &mut rng), &s.ordering).unwrap();
        let direct = sub.orbit().adjoint() * sub.orbit();
        prop_assert!((direct - sub.gram()).camax() <= 1e-10 * sub.gram().camax().max(1.0));
    }

    #[test]
    fn conjugation_preserves_covariances(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, false, &mut rng);
        let d = s.rep.dim();
        let q = haar_unitary(d, &mut rng);
        let conj = s.rep.conjugate(&q).unwrap();
        let (a, b) = (random_vector(d, &mut rng), random_vector(d, &mut rng));
        let (qa, qb) = (&q * &a, &q * &b);
        for e in 0..s.rep.group().order() {
            let before = cross_covariance(&s.rep, &a, &b, e).unwrap();
            let after = cross_covariance(&conj, &qa, &qb, e).unwrap();
            prop_assert!((before - after).norm() <= 1e-10 * a.norm() * b.norm());
        }
    }

    #[test]
    fn cross_covariance_symmetry(i in 0usize..6, conj in any::<bool>(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, conj, &mut rng);
        let g = s.rep.group();
        let (a, b) = (random_vector(s.rep.dim(), &mut rng), random_vector(s.rep.dim(), &mut rng));
        for e in 0..g.order() {
            let ab = cross_covariance(&s.rep, &a, &b, e).unwrap();
            let ba = cross_covariance(&s.rep, &b, &a, g.inv(e)).unwrap();
            prop_assert!((ab - ba.conj()).norm() <= 1e-12 * a.norm() * b.norm());
        }
    }

    #[test]
    fn reconstruction_and_coefficient_agreement(
        i in 0usize..6, conj in any::<bool>(), extra in 0usize..2, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, conj, &mut rng);
        let d = design(&s, s.transversal.h().order() + extra, &mut rng);
        prop_assume!(d.is_recoverable());
        let inv = g_compatible_left_inverse(&d, None).unwrap();
        let sub = d.subspace();
        let alpha = CoefficientVector::new(random_vector(d.order(), &mut rng));
        let x = sub.synthesize(&alpha).unwrap();
        let samples = d.generalized_samples(&x).unwrap();

        let recon = reconstruct(&d, &inv, &samples).unwrap();
        prop_assert!((&recon - &x).norm() <= 1e-9 * x.norm());

        let via_structured = inv.structured() * samples.values();
        let via_pinv = d.moore_penrose_left_inverse().unwrap() * samples.values();
        let via_analyze = sub.analyze(&x).unwrap().into_inner();
        let scale = alpha.norm();
        prop_assert!((&via_structured - &via_pinv).norm() <= 1e-9 * scale);
        prop_assert!((&via_structured - &via_analyze).norm() <= 1e-9 * scale);
    }

    #[test]
    fn structured_columns_are_left_translates(i in 0usize..6, conj in any::<bool>(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, conj, &mut rng);
        let d = design(&s, s.transversal.h().order(), &mut rng);
        prop_assume!(d.is_recoverable());
        let inv = g_compatible_left_inverse(&d, None).unwrap();
        let sm = inv.structured();
        let ell = d.ell();
        for j in 0..d.n_systems() {
            let base: Vec<_> = sm.column(j * ell).iter().copied().collect();
            for n in 0..ell {
                let moved = s.ordering.left_translate(s.rep.group(), s.transversal.tau(n), &base).unwrap();
                let col: Vec<_> = sm.column(j * ell + n).iter().copied().collect();
                prop_assert_eq!(moved, col);
            }
        }
        prop_assert!(d.left_inverse_residual(sm) <= 1e-9);
    }

    #[test]
    fn left_inverse_family_members_are_left_inverses(i in 0usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, false, &mut rng);
        let d = design(&s, s.transversal.h().order() + 1, &mut rng);
        prop_assume!(d.is_recoverable());
        let free = CMatrix::from_fn(d.order(), d.stacked().nrows(), |_, _| c(gaussian(&mut rng), gaussian(&mut rng)));
        let m = d.left_inverse_family(&free).unwrap();
        prop_assert!(d.left_inverse_residual(&m) <= 1e-8 * (1.0 + free.norm()));
    }

    #[test]
    fn too_few_systems_never_recover(i in 0usize..6, conj in any::<bool>(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, conj, &mut rng);
        let h = s.transversal.h().order();
        prop_assume!(h > 1);
        let n = rng.random_range(1..h);
        let d = design(&s, n, &mut rng);
        prop_assert!(!d.is_recoverable());
        prop_assert!(d.check_recoverability().rank <= n * d.ell());
    }

    #[test]
    fn theorem_conditions_agree(i in 0usize..6, n in 1usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = setup(i, false, &mut rng);
        let d = design(&s, n, &mut rng);
        let tc = evaluate_theorem(&d, &[]).unwrap();
        prop_assert!(tc.all_agree(), "{:?}", tc);
        prop_assert_eq!(tc.rank_full, n >= s.transversal.h().order());
    }

    #[test]
    fn frame_inequality(k in 1usize..10, dim in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vectors: Vec<CVector> = (0..k).map(|_| random_vector(dim, &mut rng)).collect();
        let fb = frame_bounds(&vectors).unwrap();
        for _ in 0..20 {
            let x = random_vector(dim, &mut rng);
            let ratio: f64 = vectors.iter().map(|v| v.dotc(&x).norm_sqr()).sum::<f64>() / x.norm_squared();
            prop_assert!(fb.lower * (1.0 - 1e-10) - 1e-12 <= ratio);
            prop_assert!(ratio <= fb.upper * (1.0 + 1e-10));
        }
    }

    #[test]
    fn pseudoinverse_penrose_conditions(rows in 1usize..9, cols in 1usize..9, rank in 1usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rank.min(rows).min(cols);
        let left = CMatrix::from_fn(rows, r, |_, _| c(gaussian(&mut rng), gaussian(&mut rng)));
        let right = CMatrix::from_fn(r, cols, |_, _| c(gaussian(&mut rng), gaussian(&mut rng)));
        let m = left * right;
        let p = pseudoinverse(&m).unwrap();
        let tol = 1e-8 * m.norm().max(1.0) * p.norm().max(1.0);
        prop_assert!((&m * &p * &m - &m).norm() <= tol * m.norm().max(1.0));
        prop_assert!((&p * &m * &p - &p).norm() <= tol * p.norm().max(1.0));
        prop_assert!((&m * &p - (&m * &p).adjoint()).norm() <= tol);
        prop_assert!((&p * &m - (&p * &m).adjoint()).norm() <= tol);
    }
}
