use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use navol_core::generate::{self, random_convex_metric, random_nonconvex_metric, unit_interval, unit_square};
use navol_core::volume::{hhat0_length_with, roof_length};
use navol_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn lattice_lengths(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice_length");
    group.sample_size(10);
    let square = unit_square();
    let mut rng = generate::rng(1);
    let a = random_nonconvex_metric(&square, &mut rng, 2);
    let b = random_convex_metric(&square, &mut rng, 2);
    let (ra, rb) = (a.legendre(), b.legendre());
    for m in [40u64, 160, 640] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(format!("square/{name}"), m), &m, |bench, &m| {
                bench.iter(|| roof_length(&ra, &rb, m, exec).unwrap())
            });
        }
    }
    // end to end, including the Legendre transforms
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(format!("square-full/{name}"), 160), &160u64, |bench, &m| {
            bench.iter(|| hhat0_length_with(&a, &b, m, exec).unwrap())
        });
    }
    let line = unit_interval();
    let p = random_nonconvex_metric(&line, &mut rng, 3);
    let q = random_convex_metric(&line, &mut rng, 3);
    let (rp, rq) = (p.legendre(), q.legendre());
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(format!("interval/{name}"), 100_000), &100_000u64, |bench, &m| {
            bench.iter(|| roof_length(&rp, &rq, m, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lattice_lengths);
criterion_main!(benches);
