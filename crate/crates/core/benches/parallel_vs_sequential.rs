use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use rpq::cli::verify_all;
use rpq::coherent::photon_distribution;
use rpq::hopf::{hopf_axiom_suite_with, HopfSpec};
use rpq::parallel::{map_range, Exec};
use rpq::special::SeriesEvalConfig;
use rpq::{DeformationSpec, Kind};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn hn() -> DeformationSpec {
    DeformationSpec::with_extras(Kind::HounkonnouNgompe, 1.2, 0.7, &[("mu", 1.0), ("nu", 1.5)]).unwrap()
}

fn bench_verify_all(c: &mut Criterion) {
    let spec = hn();
    let mut g = c.benchmark_group("verify_all");
    for (name, exec) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| verify_all(black_box(&spec), None, exec)));
    }
    g.finish();
}

fn bench_hopf(c: &mut Criterion) {
    let h = HopfSpec::builtin(hn(), 0.0).unwrap();
    let mut g = c.benchmark_group("hopf_axiom_suite");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, 10), &h, |b, h| b.iter(|| hopf_axiom_suite_with(h, 10, exec).unwrap()));
    }
    g.finish();
}

fn bench_distribution_grid(c: &mut Criterion) {
    let spec = DeformationSpec::with_extras(Kind::Kalnins, 1.0, 2.0, &[("l", 1.0), ("lambda", 0.0)]).unwrap();
    let cfg = SeriesEvalConfig::default();
    let mut g = c.benchmark_group("photon_distribution_grid");
    for (name, exec) in STRATEGIES {
        g.bench_function(name, |b| {
            b.iter(|| {
                map_range(256, exec, |i| {
                    let z = Complex64::new(0.002 * i as f64, 0.0);
                    photon_distribution(&spec, z.norm_sqr(), 64, &cfg).unwrap()
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench_verify_all, bench_hopf, bench_distribution_grid);
criterion_main!(benches);
