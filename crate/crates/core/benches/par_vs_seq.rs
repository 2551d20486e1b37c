use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grassmirror::cluster::additivity_report;
use grassmirror::ehx::{aseries_closed, aseries_constterm};
use grassmirror::fields::{action_report, Mode};
use grassmirror::{Exec, GrassCtx};
use std::hint::black_box;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn aseries(c: &mut Criterion) {
    let ctx = GrassCtx::new(2, 5).unwrap();
    let mut g = c.benchmark_group("aseries_2_5");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new("closed", name), &exec, |b, &e| {
            b.iter(|| aseries_closed(black_box(&ctx), 3, e))
        });
        g.bench_with_input(BenchmarkId::new("constterm", name), &exec, |b, &e| {
            b.iter(|| aseries_constterm(black_box(&ctx), 2, e))
        });
    }
    g.finish();
}

fn action_points(c: &mut Criterion) {
    let ctx = GrassCtx::new(2, 5).unwrap();
    let mode = Mode::Point { points: 16, seed: 1 };
    let mut g = c.benchmark_group("action_points_2_5");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| action_report(black_box(&ctx), mode, e))
        });
    }
    g.finish();
}

fn additivity(c: &mut Criterion) {
    let ctx = GrassCtx::new(2, 5).unwrap();
    let mut g = c.benchmark_group("additivity_2_5");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| additivity_report(black_box(&ctx), 10, 4, 10_000, e))
        });
    }
    g.finish();
}

criterion_group!(benches, aseries, action_points, additivity);
criterion_main!(benches);
