use curvesearch::bench::{
    boundary_subset, performance_profile, read_records, run_plan, write_records, BenchPlan,
    ProfileMetric, RecordRow, DEFAULT_BOUNDARY_TOL,
};
use curvesearch::Error;

const PLAN: &str = r#"
problems = ["rosenbrock-2", "testquad-50"]
sets = ["box", "ell"]
seed = 9
solvers = [
  { solver = "SCS", M = 0 },
  { solver = "SCS", M = 10 },
  { solver = "SPG", M = 0 },
  { solver = "SPG", M = 10 },
]

[overrides]
max_iters = 500
"#;

fn rows(plan: &BenchPlan, jobs: usize) -> Vec<RecordRow> {
    run_plan(plan, jobs)
        .unwrap()
        .iter()
        .map(RecordRow::from)
        .collect()
}

fn csv_without_time(rows: &[RecordRow]) -> String {
    let mut rows = rows.to_vec();
    for r in &mut rows {
        r.elapsed_s = 0.0;
    }
    let mut buf = Vec::new();
    write_records(&mut buf, &rows).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn one_record_per_solver_and_instance() {
    let plan = BenchPlan::from_toml(PLAN).unwrap();
    let records = rows(&plan, 2);
    assert_eq!(records.len(), 16);
    let keys: Vec<_> = records
        .iter()
        .map(|r| (r.instance(), r.solver, r.memory))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "records are ordered by instance");
}

#[test]
fn same_plan_same_bytes_modulo_time() {
    let plan = BenchPlan::from_toml(PLAN).unwrap();
    let a = csv_without_time(&rows(&plan, 1));
    let b = csv_without_time(&rows(&plan, 4));
    assert_eq!(a, b);
    let back = read_records(a.as_bytes()).unwrap();
    assert_eq!(csv_without_time(&back), a);
}

#[test]
fn instances_share_their_projected_start() {
    // Every solver starts from the same projected point, so the first
    // objective value of each instance is identical across solvers. With
    // zero iterations allowed it is also the reported f*.
    let mut plan = BenchPlan::from_toml(PLAN).unwrap();
    plan.overrides.max_iters = Some(0);
    let records = rows(&plan, 2);
    for chunk in records.chunks(4) {
        assert!(chunk
            .iter()
            .all(|r| r.f_star.to_bits() == chunk[0].f_star.to_bits()));
    }
}

#[test]
fn profile_invariants_on_real_records() {
    let plan = BenchPlan::from_toml(PLAN).unwrap();
    let records = rows(&plan, 2);
    for metric in [
        ProfileMetric::Time,
        ProfileMetric::FStar,
        ProfileMetric::Iterations,
    ] {
        let table = performance_profile(&records, metric, None).unwrap();
        let count = table.included_instances.len() as f64;
        for (spec, curve) in &table.rho {
            assert!(curve.windows(2).all(|w| w[0] <= w[1]));
            assert!(curve.iter().all(|r| (0.0..=1.0).contains(r)));
            let successes = records
                .iter()
                .filter(|r| {
                    r.solver == spec.solver && r.memory == spec.memory && r.status.is_success()
                })
                .filter(|r| table.included_instances.contains(&r.instance()))
                .count() as f64;
            assert_eq!(*curve.last().unwrap(), successes / count);
        }
    }
}

#[test]
fn identical_solvers_have_identical_profiles() {
    let plan = BenchPlan::from_toml(PLAN).unwrap();
    let mut records: Vec<RecordRow> = rows(&plan, 2)
        .into_iter()
        .filter(|r| r.memory == 0 && r.solver.as_str() == "SCS")
        .collect();
    let copies: Vec<RecordRow> = records
        .iter()
        .cloned()
        .map(|mut r| {
            r.memory = 7;
            r
        })
        .collect();
    records.extend(copies);
    let table = performance_profile(&records, ProfileMetric::Time, None).unwrap();
    let curves: Vec<_> = table.rho.values().collect();
    assert_eq!(curves.len(), 2);
    assert_eq!(curves[0], curves[1]);
}

#[test]
fn boundary_subset_on_real_records() {
    let plan = BenchPlan::from_toml(PLAN).unwrap();
    let records = rows(&plan, 2);
    let subset = boundary_subset(&records, DEFAULT_BOUNDARY_TOL);
    // The diagonal quadratic's minimiser, the origin, is interior to the box
    // but outside the 50-dimensional ellipsoid around the all-ones point.
    // Rosenbrock's (1, 1) sits on the corner of the box.
    assert!(
        subset.contains(&"rosenbrock-2/box".to_string()),
        "{subset:?}"
    );
    assert!(
        subset.contains(&"testquad-50/ell".to_string()),
        "{subset:?}"
    );
    assert!(
        !subset.contains(&"testquad-50/box".to_string()),
        "{subset:?}"
    );
}

#[test]
fn plan_errors_surface_before_running() {
    let mut plan = BenchPlan::from_toml(PLAN).unwrap();
    plan.solvers.clear();
    assert!(matches!(run_plan(&plan, 1), Err(Error::Plan(_))));
    let mut plan = BenchPlan::from_toml(PLAN).unwrap();
    plan.problems.push("hs71".into());
    assert_eq!(
        run_plan(&plan, 1),
        Err(Error::UnknownProblem("hs71".into()))
    );
}
