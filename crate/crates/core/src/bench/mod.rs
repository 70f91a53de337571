//! Benchmark harness: plans, batch runs, record files, performance profiles
//! and the boundary-solution subset.

mod plan;
mod profile;
mod records;

pub use plan::{BenchPlan, ConfigOverrides, SolverSpec};
pub use profile::{
    boundary_subset, performance_profile, write_profile, ProfileMetric, ProfileTable,
    DEFAULT_BOUNDARY_TOL,
};
pub use records::{read_records, write_records, RecordRow, RECORDS_HEADER};

use rayon::prelude::*;

use crate::problems::problem_by_name;
use crate::sets::{ellipsoid_seed, set_by_name};
use crate::solvers::RunRecord;
use crate::{Error, Result};

/// `problem/set`, the key records are grouped and sorted by.
pub fn instance_id(problem: &str, set: &str) -> String {
    format!("{problem}/{set}")
}

/// Run every (solver, problem, set) combination of `plan` on up to `jobs`
/// threads. Individual run failures end up in the records' status.
///
/// Records come back sorted by instance, then solver and memory.
pub fn run_plan(plan: &BenchPlan, jobs: usize) -> Result<Vec<RunRecord>> {
    plan.validate()?;
    let cfg = plan.config()?;
    let problems = plan.problem_list();
    let sets = plan.set_list();

    let mut work = Vec::new();
    for p in &problems {
        for s in &sets {
            for spec in &plan.solvers {
                work.push((p.as_str(), s.as_str(), *spec));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Plan(format!("cannot start worker pool: {e}")))?;
    let mut records = pool.install(|| {
        work.par_iter()
            .map(|&(p, s, spec)| {
                let problem = problem_by_name(p)?;
                let n = problem.dim();
                let set = set_by_name(s, n, ellipsoid_seed(plan.seed, p, n))?;
                let cfg = cfg.clone().with_memory(spec.memory);
                Ok(spec.solver.solve(problem.as_ref(), set.as_ref(), &cfg))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by(|a, b| {
        (&a.problem, &a.set, a.solver, a.memory).cmp(&(&b.problem, &b.set, b.solver, b.memory))
    });
    Ok(records)
}
