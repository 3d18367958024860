use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use finite_sampling::linalg::c;
use finite_sampling::sampling::{build_design, g_compatible_left_inverse, reconstruct};
use finite_sampling::{CVector, CanonicalOrdering, CyclicSubspace, FiniteGroup, SamplingDesign, Transversal, UnitaryRep};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

struct Case {
    name: &'static str,
    sub: CyclicSubspace,
    systems: Vec<CVector>,
    transversal: Transversal,
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> CVector {
    CVector::from_fn(n, |_, _| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
}

fn case(name: &'static str, g: FiniteGroup, k: &[usize], h: &[usize], extra_systems: usize) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(g.order() as u64);
    let transversal = Transversal::new(&g, &g.generate(k).unwrap(), &g.generate(h).unwrap()).unwrap();
    let ordering = CanonicalOrdering::new(&g, &transversal);
    let rep = UnitaryRep::regular(&g);
    let sub = CyclicSubspace::new(&rep, &random_vector(g.order(), &mut rng), &ordering).unwrap();
    let n = transversal.h().order() + extra_systems;
    let systems = (0..n).map(|_| random_vector(g.order(), &mut rng)).collect();
    Case { name, sub, systems, transversal }
}

fn cases() -> Vec<Case> {
    vec![
        case("Z24 |H|=8", FiniteGroup::cyclic(24).unwrap(), &[3], &[8], 0),
        case("Z24 |H|=3 N=4", FiniteGroup::cyclic(24).unwrap(), &[8], &[3], 1),
        case("D5", FiniteGroup::dihedral(5).unwrap(), &[5], &[1], 0),
        case("D12", FiniteGroup::dihedral(12).unwrap(), &[12], &[1], 0),
    ]
}

fn design(case: &Case) -> SamplingDesign {
    build_design(&case.sub, &case.systems, &case.transversal).unwrap()
}

fn bench_build_design(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("build_design");
    for case in cases() {
        group.bench_with_input(BenchmarkId::from_parameter(case.name), &case, |b, case| {
            b.iter(|| design(black_box(case)))
        });
    }
    group.finish();
}

fn bench_left_inverse(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("g_compatible_left_inverse");
    for case in cases() {
        let d = design(&case);
        group.bench_with_input(BenchmarkId::from_parameter(case.name), &d, |b, d| {
            b.iter(|| g_compatible_left_inverse(black_box(d), None).unwrap())
        });
    }
    group.finish();
}

fn bench_reconstruct(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("reconstruct");
    for case in cases() {
        let d = design(&case);
        let inv = g_compatible_left_inverse(&d, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = case.sub.project(&random_vector(d.subspace().rep().dim(), &mut rng)).unwrap();
        let samples = d.generalized_samples(&x).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(case.name), &samples, |b, s| {
            b.iter(|| reconstruct(&d, &inv, black_box(s)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_build_design, bench_left_inverse, bench_reconstruct);
criterion_main!(benches);
