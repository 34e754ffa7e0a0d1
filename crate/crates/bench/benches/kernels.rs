use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qift_bench::{case_n25, odd_state};
use qift_core::experiment::ScanOptions;
use qift_core::transform::{rp_at, spectrum, DISTRIBUTION_CEILING};
use qift_core::{best_approx, peak_scan, ApproxMode, TransformSpec};

fn rp_kernel(c: &mut Criterion) {
    let (state, ys) = case_n25();
    let mut g = c.benchmark_group("rp_n25");
    for spec in [
        TransformSpec::Integral,
        TransformSpec::ModifiedAqft { m: 3 },
        TransformSpec::Aqft { m: 8 },
        TransformSpec::ExactQft,
    ] {
        g.bench_with_input(BenchmarkId::from_parameter(spec), &spec, |b, &spec| {
            b.iter(|| rp_at(black_box(&state), black_box(ys[1]), spec).unwrap())
        });
    }
    g.finish();
}

fn butterfly(c: &mut Criterion) {
    let state = odd_state(20);
    let mut g = c.benchmark_group("spectrum_n20");
    g.sample_size(10);
    for spec in [TransformSpec::Integral, TransformSpec::ExactQft] {
        g.bench_with_input(BenchmarkId::from_parameter(spec), &spec, |b, &spec| {
            b.iter(|| spectrum(black_box(&state), spec, DISTRIBUTION_CEILING).unwrap())
        });
    }
    g.finish();
}

fn scans(c: &mut Criterion) {
    let state = odd_state(20);
    let mut g = c.benchmark_group("peak_scan_n20");
    g.sample_size(10);
    for spec in [TransformSpec::Integral, TransformSpec::ModifiedAqft { m: 3 }] {
        g.bench_with_input(BenchmarkId::from_parameter(spec), &spec, |b, &spec| {
            b.iter(|| peak_scan(black_box(&state), spec, &ScanOptions::peak()).unwrap())
        });
    }
    g.finish();
}

fn recovery(c: &mut Criterion) {
    c.bench_function("best_approx_n25", |b| {
        b.iter(|| best_approx(black_box(23906945), 1 << 25, 8192, ApproxMode::Best).unwrap())
    });
}

criterion_group!(benches, rp_kernel, butterfly, scans, recovery);
criterion_main!(benches);
