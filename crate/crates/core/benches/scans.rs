use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holobraid_core::curve::{genericity_report, CurveConfig, FourierSeries};
use holobraid_core::garside::{summit_set_with, SUMMIT_SET_STRAND_CAP};
use holobraid_core::{BraidWord, Exec};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn double_point_scan(c: &mut Criterion) {
    let f = FourierSeries::new(0.0, vec![1.0, 4.0, 0.0, 1.0, 1.5], vec![]).unwrap();
    let mut group = c.benchmark_group("genericity_report");
    for (name, exec) in MODES {
        let cfg = CurveConfig {
            grid: 8192,
            exec,
            ..CurveConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| genericity_report(&f, cfg).unwrap())
        });
    }
    group.finish();
}

fn summit_sets(c: &mut Criterion) {
    let w: BraidWord = "n=5 1 -2 3 4 -1 2 2 -3 4 1 -4 3".parse().unwrap();
    let mut group = c.benchmark_group("summit_set");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| summit_set_with(&w, SUMMIT_SET_STRAND_CAP, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, double_point_scan, summit_sets);
criterion_main!(benches);
