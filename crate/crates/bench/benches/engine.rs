use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use equirep::algebra::integral_homology;
use equirep::bredon::{bredon_homology, TrivialModule};
use equirep::functor::{group_homology, tor_over_category, AbFunctor, FiniteCategory, Variance};
use equirep::g_complex::sd;
use equirep::lab::linear_sphere;
use equirep::{FgAbGroup, FiniteGroup};

fn homology(c: &mut Criterion) {
    let s3 = linear_sphere(2, &[1, 1]).unwrap();
    let sd2 = sd(&sd(&s3).unwrap()).unwrap();
    let cc = sd2.chain_complex();
    c.bench_function("integral homology of sd2 S3", |b| {
        b.iter(|| integral_homology(black_box(&cc)))
    });
    let x = Arc::new(sd2);
    let z = TrivialModule::z();
    c.bench_function("bredon homology of sd2 S3 over C2", |b| {
        b.iter(|| bredon_homology(&x, None, &z).unwrap())
    });
}

fn tor(c: &mut Criterion) {
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let cat = FiniteCategory::from_group(&s3);
    let f = AbFunctor::constant(&cat, Variance::Contra, &FgAbGroup::z());
    let g = AbFunctor::constant(&cat, Variance::Co, &FgAbGroup::cyclic(2));
    c.bench_function("cobar tor S3 to degree 2", |b| {
        b.iter(|| tor_over_category(&cat, &f, &g, 2).unwrap())
    });
    c.bench_function("bar homology S3 to degree 2", |b| {
        b.iter(|| group_homology(&s3, &FgAbGroup::cyclic(2), 2).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = homology, tor
}
criterion_main!(benches);
