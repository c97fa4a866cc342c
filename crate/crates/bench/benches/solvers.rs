use std::hint::black_box;

use bargain_bench::{power_frontier, quarter_circle, random_hull};
use bargain_core::{
    discretize, simulate_threat_mean, solve_cloud, solve_frontier, solve_polygon, trim,
    SolverConfig,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn polygon(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("solve_polygon");
    for n in [20, 200, 2000] {
        let hull = random_hull(n, 42);
        group.bench_with_input(BenchmarkId::new("random_hull", n), &hull, |b, h| {
            b.iter(|| solve_polygon(black_box(h), &cfg))
        });
    }
    for arc in [255, 1023] {
        let poly = power_frontier().inscribe(arc).unwrap();
        group.bench_with_input(
            BenchmarkId::new("inscribed_power", arc + 1),
            &poly,
            |b, p| b.iter(|| solve_polygon(black_box(p), &cfg)),
        );
    }
    group.finish();

    let hull = random_hull(2000, 7);
    c.bench_function("trim/random_hull_2000", |b| {
        b.iter(|| trim(black_box(&hull)))
    });
}

fn frontier(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let power = power_frontier();
    let circle = quarter_circle();
    c.bench_function("solve_frontier/power", |b| {
        b.iter(|| solve_frontier(black_box(&power), &cfg))
    });
    c.bench_function("solve_frontier/circle", |b| {
        b.iter(|| solve_frontier(black_box(&circle), &cfg))
    });
}

fn oracle(c: &mut Criterion) {
    let power = power_frontier();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for res in [1e-2, 1e-3] {
        group.bench_with_input(BenchmarkId::new("power", res), &res, |b, &r| {
            b.iter(|| solve_cloud(&discretize(black_box(&power), r).unwrap()))
        });
    }
    group.finish();
}

fn threat(c: &mut Criterion) {
    let corners = power_frontier().corners();
    c.bench_function("simulate_threat_mean/100000", |b| {
        b.iter(|| simulate_threat_mean(black_box(&corners), 100_000, 42))
    });
}

criterion_group!(benches, polygon, frontier, oracle, threat);
criterion_main!(benches);
