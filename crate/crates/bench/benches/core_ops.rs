use criterion::{criterion_group, criterion_main, Criterion};

use sftkit::complex::pair_homology;
use sftkit::dimension::{induced_map, Kind, Side};
use sftkit::io::{load_code, load_pair, load_square};
use sftkit::sft::{degree, fibre_product, is_injective};
use sftkit::verify::{verify_pullback_identity, Level, Settings};
use sftkit_bench::data;

fn codes(c: &mut Criterion) {
    let pi = load_code(data("pi.json")).unwrap();
    let pi3 = load_code(data("pi3.json")).unwrap();
    c.bench_function("induced_map s_star pi", |b| b.iter(|| induced_map(&pi, Kind::SStar, 8).unwrap()));
    c.bench_function("degree pi3", |b| b.iter(|| degree(&pi3).unwrap()));
    c.bench_function("is_injective pi3", |b| b.iter(|| is_injective(&pi3)));
    c.bench_function("fibre_product pi pi", |b| b.iter(|| fibre_product(&pi, &pi).unwrap()));
}

fn homology(c: &mut Criterion) {
    let settings = Settings::default();
    let pair = load_pair(data("pair_G3_pi3_H.json")).unwrap();
    c.bench_function("pair_homology G3 over H", |b| {
        b.iter(|| pair_homology(&pair, Side::S, settings.caps, settings.level_window).unwrap())
    });
    let square = load_square(data("square2.json")).unwrap();
    let mut group = c.benchmark_group("pullback identity");
    group.sample_size(10);
    group.bench_function("square 2, homology level", |b| {
        b.iter(|| verify_pullback_identity(&square, Level::Homology, &settings).unwrap())
    });
    group.finish();
}

criterion_group!(benches, codes, homology);
criterion_main!(benches);
