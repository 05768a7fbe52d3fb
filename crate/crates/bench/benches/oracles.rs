use criterion::{criterion_group, criterion_main, Criterion};
use pattern_forge::colouring::{ColourMap, Colouring};
use pattern_forge::group::fs_set;
use pattern_forge::pattern::{canonical_2_adequate, is_adequate};
use pattern_forge::verify::{
    delta_descent_check, find_monochromatic_ap, find_monochromatic_fs, no_seven_norms, Domain,
};
use pattern_forge::{GroupSpec, VerifyConfig};
use std::hint::black_box;

fn verify(c: &mut Criterion) {
    let cfg = VerifyConfig::default();
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("thm4.1-k3", |b| b.iter(|| delta_descent_check(3, 3, cfg).unwrap()));
    group.bench_function("lemma3.1-d3", |b| b.iter(|| no_seven_norms(3, 3, cfg).unwrap()));
    let box3 = Domain::nonzero(&GroupSpec::int_box(2, 3).unwrap()).unwrap();
    group.bench_function("thm3.2-b2-n3", |b| {
        b.iter(|| find_monochromatic_fs("thm3.2", &Colouring::SumSquares, &box3, 3, cfg).unwrap())
    });
    let g = GroupSpec::prime_power_power(3, 2, 2).unwrap();
    group.bench_function("thm5.4-z9-squared", |b| {
        b.iter(|| find_monochromatic_ap(&Colouring::ProductSigma, &g, cfg).unwrap())
    });
    group.finish();
}

fn primitives(c: &mut Criterion) {
    let spec = GroupSpec::cyclic_power(5, 12).unwrap();
    let xs = spec.standard_basis();
    c.bench_function("fs_set-12", |b| b.iter(|| fs_set(black_box(&xs)).unwrap()));
    let p = canonical_2_adequate(5);
    c.bench_function("is_adequate", |b| b.iter(|| is_adequate(black_box(&p))));
    let x = xs.iter().fold(spec.zero(), |acc, y| acc.add(y).unwrap());
    let sigma = Colouring::ProductSigma;
    c.bench_function("product_sigma", |b| b.iter(|| sigma.colour(black_box(&x)).unwrap()));
}

criterion_group!(benches, verify, primitives);
criterion_main!(benches);
