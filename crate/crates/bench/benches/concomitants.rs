use std::hint::black_box;

use concom_core::signal::{analytic_signal, concomitant_series, parse_selection, synth_plane_wave, PlaneWaveParams};
use concom_core::verify::completeness_report;
use concom_core::{compute, eb_oracle, random_bivector, Complex64, GaussianRational};
use criterion::{criterion_group, criterion_main, Criterion};

fn single_bivector(c: &mut Criterion) {
    let exact = random_bivector::<GaussianRational>(7);
    let float = random_bivector::<Complex64>(7);
    let mut g = c.benchmark_group("compute");
    g.bench_function("rational", |b| b.iter(|| compute(black_box(&exact))));
    g.bench_function("float", |b| b.iter(|| compute(black_box(&float))));
    g.bench_function("oracle_rational", |b| b.iter(|| eb_oracle(black_box(&exact))));
    g.finish();
}

fn signal(c: &mut Criterion) {
    let series = synth_plane_wave(&PlaneWaveParams::default()).unwrap();
    let selection = parse_selection("T00,T10,T20,T30,Q00,Q10,Q20,Q30,Lplus,Lminus").unwrap();
    let mut g = c.benchmark_group("signal_1024");
    g.bench_function("analytic_signal", |b| b.iter(|| analytic_signal(black_box(&series))));
    let analytic = analytic_signal(&series);
    g.bench_function("concomitant_series", |b| b.iter(|| concomitant_series(black_box(&analytic), &selection).unwrap()));
    g.finish();
}

fn completeness(c: &mut Criterion) {
    let mut g = c.benchmark_group("completeness");
    g.sample_size(10);
    g.bench_function("exact_ranks", |b| b.iter(|| completeness_report().unwrap()));
    g.finish();
}

criterion_group!(benches, single_bivector, signal, completeness);
criterion_main!(benches);
