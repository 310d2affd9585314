use std::hint::black_box;

use biharm_core::exec::Exec;
use biharm_core::jetoracle::{numeric_check_all, OracleConfig};
use biharm_core::paramcheck::numeric_pd_scan;
use biharm_core::radial::{lin_grid, log_grid, scan_shooting, Tolerances};
use biharm_core::registry::{Identity, Registry};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn oracle(c: &mut Criterion) {
    let reg = Registry::printed();
    let ids: Vec<&Identity> = reg.identities().iter().collect();
    let cfg = OracleConfig {
        samples: 50,
        ..OracleConfig::default()
    };
    let mut g = c.benchmark_group("oracle_50_jets");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| numeric_check_all(black_box(&ids), &cfg, exec))
        });
    }
    g.finish();
}

fn pd_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("pd_scan_5_to_40");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| numeric_pd_scan(5, black_box(40), 200, exec).unwrap())
        });
    }
    g.finish();
}

fn registry(c: &mut Criterion) {
    let reg = Registry::printed();
    let mut g = c.benchmark_group("identity_suite");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| reg.verify(black_box(&[]), None, exec).unwrap())
        });
    }
    g.finish();
}

fn radial(c: &mut Criterion) {
    let u0s = log_grid(0.1, 10.0, 10);
    let v0s = lin_grid(-10.0, 0.0, 10);
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("radial_10x10");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scan_shooting(6, 2.0, black_box(&u0s), &v0s, 50.0, &tol, exec))
        });
    }
    g.finish();
}

criterion_group!(benches, oracle, pd_scan, registry, radial);
criterion_main!(benches);
