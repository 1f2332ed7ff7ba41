use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use godel_c60::gauge::{FluxConfig, KPoint, MonopoleConfig};
use godel_c60::geometry::GeometryParams;
use godel_c60::observables::{persistent_current, LevelSet};
use godel_c60::spectrum::{solve_spectrum, Branch, QuantumNumbers, TwiceM};

fn spectrum(c: &mut Criterion) {
    let p = GeometryParams::new(0.9, 0.05, 1.0).unwrap();
    let f = FluxConfig::new(1.3);
    let m = MonopoleConfig::c60();
    let q = QuantumNumbers::new(2, 3, KPoint::Plus);
    c.bench_function("solve_spectrum", |b| {
        b.iter(|| solve_spectrum(black_box(&q), black_box(&p), &f, &m).unwrap())
    });

    let ls = LevelSet::new(6, TwiceM(11), Branch::Minus);
    c.bench_function("persistent_current n<=6 |m|<=11/2", |b| {
        b.iter(|| persistent_current(black_box(&ls), &p, &f, &m).unwrap())
    });
}

criterion_group!(benches, spectrum);
criterion_main!(benches);
