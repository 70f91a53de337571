use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curvesearch::problems::problem_by_name;
use curvesearch::sets::{ellipsoid_seed, set_by_name};
use curvesearch::solvers::{scs_solve, spg_solve};
use curvesearch::SolverConfig;

const CASES: [(&str, &str); 4] = [
    ("rosenbrock-2", "box"),
    ("rosenbrock-2", "com"),
    ("testquad-50", "ell"),
    ("testquad-50", "sph"),
];

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(20);
    for (problem, set) in CASES {
        let p = problem_by_name(problem).unwrap();
        let s = set_by_name(set, p.dim(), ellipsoid_seed(0, problem, p.dim())).unwrap();
        let id = format!("{problem}/{set}");
        for memory in [0usize, 10] {
            let cfg = SolverConfig {
                memory,
                ..SolverConfig::default()
            };
            group.bench_function(BenchmarkId::new(format!("SCS(M={memory})"), &id), |b| {
                b.iter(|| scs_solve(p.as_ref(), s.as_ref(), &cfg))
            });
            group.bench_function(BenchmarkId::new(format!("SPG(M={memory})"), &id), |b| {
                b.iter(|| spg_solve(p.as_ref(), s.as_ref(), &cfg))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, solvers);
criterion_main!(benches);
