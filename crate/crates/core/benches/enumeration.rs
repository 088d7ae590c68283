//! The two hot loops, FPL enumeration and memoised matching counts, under
//! the rayon build and the sequential fallback.
//!
//! The fallback is chosen at compile time, so compare the two builds with
//! `cargo bench -p fpl-core` and `cargo bench -p fpl-core --no-default-features`.
//! Their ids differ ("rayon-*" and "sequential"), so criterion keeps both
//! series side by side in `target/criterion`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fpl_core::fpl::{count_fpls, EnumOptions};
use fpl_core::tiling::{count_matchings, hexagon_region};

#[cfg(feature = "parallel")]
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("rayon-1", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("rayon-all", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

// The pool is inert here: the library never calls into rayon.
#[cfg(not(feature = "parallel"))]
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![("sequential", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap())]
}

fn fpl_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_fpls");
    group.sample_size(10);
    for (name, pool) in pools() {
        for size in [6usize, 7] {
            group.bench_with_input(BenchmarkId::new(name, size), &size, |b, &size| {
                b.iter(|| pool.install(|| count_fpls(size, &EnumOptions::default()).unwrap()))
            });
        }
    }
    group.finish();
}

fn hexagon_matchings(c: &mut Criterion) {
    let mut group = c.benchmark_group("hexagon_matchings");
    group.sample_size(10);
    for (name, pool) in pools() {
        for side in [3i64, 4] {
            let region = hexagon_region(side);
            group.bench_with_input(BenchmarkId::new(name, side), &region, |b, r| {
                b.iter(|| pool.install(|| count_matchings(r)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, fpl_enumeration, hexagon_matchings);
criterion_main!(benches);
