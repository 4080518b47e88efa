use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use derange_bench::{extraspecial_s2, gammal1, m12, sp4_3};
use derange_core::gammal1::enumerate_in;
use derange_core::matgroup::affine_stats;
use derange_core::perm::DEFAULT_CAP;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumeration");
    g.sample_size(10);
    g.bench_function("m12", |b| b.iter_batched(m12, |g| g.enumerated(DEFAULT_CAP).unwrap(), BatchSize::LargeInput));
    g.bench_function("sp4_3", |b| b.iter_batched(sp4_3, |g| g.enumerated(DEFAULT_CAP).unwrap(), BatchSize::LargeInput));
    g.finish();
}

fn proportions(c: &mut Criterion) {
    let m12 = m12().enumerated(DEFAULT_CAP).unwrap();
    // Fixed-space histograms are cached per group, so each batch gets a fresh one.
    let sp = || sp4_3().enumerated(DEFAULT_CAP).unwrap();
    let ex = || extraspecial_s2().enumerated(DEFAULT_CAP).unwrap();
    let mut g = c.benchmark_group("proportions");
    g.sample_size(10);
    g.bench_function("delta_m12", |b| b.iter(|| m12.delta().unwrap()));
    g.bench_function("blocks_m12", |b| b.iter(|| m12.block_systems().unwrap()));
    g.bench_function("affine_stats_sp4_3", |b| b.iter_batched(sp, |g| affine_stats(&g).unwrap(), BatchSize::LargeInput));
    g.bench_function("affine_stats_extraspecial", |b| b.iter_batched(ex, |g| affine_stats(&g).unwrap(), BatchSize::LargeInput));
    g.finish();
}

fn gammal1_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("gammal1");
    g.sample_size(10);
    for q in [64u64, 256] {
        let u = gammal1(q);
        g.bench_function(format!("enumerate_{q}"), |b| b.iter(|| enumerate_in(&u).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, enumeration, proportions, gammal1_sweep);
criterion_main!(benches);
