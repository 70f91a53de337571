use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curvesearch::sets::{set_by_name, SET_NAMES};
use std::hint::black_box;

fn projections(c: &mut Criterion) {
    let mut group = c.benchmark_group("project");
    for n in [2usize, 50, 1000] {
        // Points well outside every set so each projection does real work.
        let z: Vec<f64> = (0..n)
            .map(|i| ((i * 37 % 101) as f64 - 50.0) * 3.0)
            .collect();
        for name in SET_NAMES {
            let set = set_by_name(name, n, 7).unwrap();
            group.bench_with_input(BenchmarkId::new(name, n), &z, |b, z| {
                b.iter(|| set.project(black_box(z)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, projections);
criterion_main!(benches);
