use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jbtriple::preserver::{preserves_truncation_of_triple_products, PreserverMap};
use jbtriple::spectral::{range_tripotent, resolve};
use jbtriple::truncation::characterize;
use jbtriple::{Element, Factor, JbElement, Tolerance, Tripotent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn factors() -> [Factor; 4] {
    [Factor::Rect { m: 3, n: 3 }, Factor::Sym { n: 3 }, Factor::Antisym { n: 4 }, Factor::Spin { n: 5 }]
}

fn triple_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("triple_product");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for f in factors() {
        let (a, b, x) = (Element::random(f, &mut rng), Element::random(f, &mut rng), Element::random(f, &mut rng));
        group.bench_with_input(BenchmarkId::from_parameter(f), &(a, b, x), |bn, (a, b, x)| {
            bn.iter(|| Element::triple(black_box(a), black_box(b), black_box(x)).unwrap())
        });
    }
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut group = c.benchmark_group("spectral");
    for f in factors() {
        let a = Element::random(f, &mut rng);
        group.bench_with_input(BenchmarkId::new("resolve", f), &a, |bn, a| bn.iter(|| resolve(black_box(a), &tol).unwrap()));
        group.bench_with_input(BenchmarkId::new("range_tripotent", f), &a, |bn, a| {
            bn.iter(|| range_tripotent(black_box(a), &tol).unwrap())
        });
    }
    group.finish();
}

fn peirce(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut group = c.benchmark_group("peirce");
    for f in factors() {
        let e = range_tripotent(&Element::random(f, &mut rng), &tol).unwrap().into_element();
        group.bench_with_input(BenchmarkId::from_parameter(f), &e, |bn, e| {
            bn.iter(|| Tripotent::new(black_box(e).clone(), &tol).unwrap().peirce().map(|p| p.complex_dims()).unwrap())
        });
    }
    group.finish();
}

fn truncation(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = Factor::Rect { m: 3, n: 3 };
    let (a, b) = (Element::random(f, &mut rng), Element::random(f, &mut rng));
    c.bench_function("characterize/Rect(3,3)", |bn| bn.iter(|| characterize(black_box(&a), black_box(&b), &tol).unwrap()));
}

fn preservation(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let map = PreserverMap::random_unitary_multiplier(Factor::Rect { m: 2, n: 2 }, &mut rng).unwrap();
    let mut group = c.benchmark_group("preservation");
    group.sample_size(10);
    group.bench_function("unitary_multiplier/1000", |bn| {
        bn.iter(|| preserves_truncation_of_triple_products(black_box(&map), 1000, 42, &tol))
    });
    group.finish();
}

criterion_group!(benches, triple_product, spectral, peirce, truncation, preservation);
criterion_main!(benches);
