use std::hint::black_box;

use coopcap::gauss_capacity::gap_report;
use coopcap::ld_achieve::ld_achievable_sum_rate;
use coopcap::ld_schemes::run_example;
use coopcap::ld_schemes::Example;
use coopcap::rate_region::{max_sum_rate, max_sum_rate_bruteforce, max_sum_rate_fme, Rational, Scalar};
use coopcap::{LdParams, Prime};
use coopcap_bench::{gauss_channels, ld_instances};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn sum_rate_solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("sum_rate");
    for (name, inst) in ld_instances() {
        g.bench_with_input(BenchmarkId::new("simplex", name), &inst.system, |b, s| {
            b.iter(|| max_sum_rate(black_box(s)))
        });
        g.bench_with_input(BenchmarkId::new("fme", name), &inst.system, |b, s| {
            b.iter(|| max_sum_rate_fme(black_box(s)))
        });
        g.bench_with_input(BenchmarkId::new("lattice", name), &inst.system, |b, s| {
            b.iter(|| max_sum_rate_bruteforce(black_box(s), Rational::one()))
        });
    }
    g.finish();
}

fn ld_grid(c: &mut Criterion) {
    let cases: Vec<LdParams> = (0..=3u32)
        .flat_map(|a| (0..=3u32).flat_map(move |b| (0..=3u32).map(move |e| LdParams::new(a, b, b, a, e))))
        .collect();
    c.bench_function("ld_achievable/symmetric_grid", |b| {
        b.iter(|| cases.iter().map(|p| ld_achievable_sum_rate(black_box(p)).unwrap()).sum::<i64>())
    });
}

fn gaussian(c: &mut Criterion) {
    let channels = gauss_channels(64);
    c.bench_function("gap_report/64_channels", |b| {
        b.iter(|| channels.iter().map(|p| gap_report(black_box(p)).unwrap().gap).fold(0.0, f64::max))
    });
}

fn simulation(c: &mut Criterion) {
    let p = Prime::new(3).unwrap();
    let mut g = c.benchmark_group("ld_sim");
    for ex in [Example::One, Example::Two, Example::Three] {
        g.bench_function(format!("{ex:?}/T64"), |b| b.iter(|| run_example(ex, 64, black_box(1), p).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, sum_rate_solvers, ld_grid, gaussian, simulation);
criterion_main!(benches);
