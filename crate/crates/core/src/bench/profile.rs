use std::collections::BTreeMap;
use std::io::Write;

use super::{RecordRow, SolverSpec};
use crate::{Error, Result};

pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-5;

/// Smallest time credited to a run, so instant runs still give finite ratios.
const TIME_FLOOR_S: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileMetric {
    FStar,
    Time,
    Iterations,
}

impl ProfileMetric {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fstar" | "f_star" => Ok(Self::FStar),
            "time" => Ok(Self::Time),
            "iters" | "iterations" => Ok(Self::Iterations),
            other => Err(Error::Domain(format!("unknown profile metric `{other}`"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::FStar => "fstar",
            Self::Time => "time",
            Self::Iterations => "iters",
        }
    }

    fn raw(&self, r: &RecordRow) -> f64 {
        match self {
            Self::FStar => r.f_star,
            Self::Time => r.elapsed_s.max(TIME_FLOOR_S),
            Self::Iterations => r.iterations.max(1) as f64,
        }
    }
}

/// Dolan–Moré performance profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub metric: ProfileMetric,
    pub tau_grid: Vec<f64>,
    /// `rho[s][j]`: fraction of included instances on which solver `s` is
    /// within a factor `tau_grid[j]` of the best.
    pub rho: BTreeMap<SolverSpec, Vec<f64>>,
    /// Instances with at least one successful run.
    pub included_instances: Vec<String>,
    /// Performance ratio per solver and included instance; `inf` for failures.
    pub ratios: BTreeMap<SolverSpec, Vec<f64>>,
}

impl ProfileTable {
    pub fn rho_of(&self, spec: &SolverSpec) -> Option<&[f64]> {
        self.rho.get(spec).map(Vec::as_slice)
    }
}

fn spec_of(r: &RecordRow) -> SolverSpec {
    SolverSpec::new(r.solver, r.memory)
}

fn by_instance(records: &[RecordRow]) -> BTreeMap<String, Vec<&RecordRow>> {
    let mut out: BTreeMap<String, Vec<&RecordRow>> = BTreeMap::new();
    for r in records {
        out.entry(r.instance()).or_default().push(r);
    }
    out
}

/// Ratios `metric_s / min over successful solvers` per instance.
///
/// Failed runs, and solvers with no record for an instance, get `+inf`.
/// Instances where every solver failed are dropped. For `FStar`, all values
/// of an instance are shifted by `1 - min + 1e-12` when its best value is not
/// positive. `tau_grid = None` uses every distinct finite ratio (plus 1) as
/// the grid, which reproduces the step function exactly.
pub fn performance_profile(
    records: &[RecordRow],
    metric: ProfileMetric,
    tau_grid: Option<&[f64]>,
) -> Result<ProfileTable> {
    if let Some(grid) = tau_grid {
        if grid.is_empty() || grid[0] < 1.0 || grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain(
                "tau grid must be increasing and start at 1 or above".into(),
            ));
        }
    }
    let solvers: Vec<SolverSpec> = {
        let mut s: Vec<_> = records.iter().map(spec_of).collect();
        s.sort();
        s.dedup();
        s
    };
    let mut ratios: BTreeMap<SolverSpec, Vec<f64>> =
        solvers.iter().map(|s| (*s, Vec::new())).collect();
    let mut included = Vec::new();

    for (instance, rows) in by_instance(records) {
        let ok: Vec<&&RecordRow> = rows.iter().filter(|r| r.status.is_success()).collect();
        let Some(best_raw) = ok.iter().map(|r| metric.raw(r)).min_by(f64::total_cmp) else {
            continue;
        };
        let shift = if metric == ProfileMetric::FStar && best_raw <= 0.0 {
            1.0 - best_raw + 1e-12
        } else {
            0.0
        };
        let best = best_raw + shift;
        for spec in &solvers {
            let mut mine = rows.iter().filter(|r| spec_of(r) == *spec);
            let ratio = match (mine.next(), mine.next()) {
                (Some(_), Some(_)) => {
                    return Err(Error::Domain(format!(
                        "{spec:?} has two records for `{instance}`"
                    )))
                }
                (Some(r), None) if r.status.is_success() => (metric.raw(r) + shift) / best,
                _ => f64::INFINITY,
            };
            ratios
                .get_mut(spec)
                .expect("every solver has a column")
                .push(ratio);
        }
        included.push(instance);
    }
    if included.is_empty() {
        return Err(Error::EmptyProfile);
    }

    let grid: Vec<f64> = match tau_grid {
        Some(g) => g.to_vec(),
        None => {
            let mut g: Vec<f64> = ratios
                .values()
                .flatten()
                .copied()
                .filter(|r| r.is_finite())
                .collect();
            g.push(1.0);
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        }
    };
    let count = included.len() as f64;
    let rho = ratios
        .iter()
        .map(|(spec, rs)| {
            let curve = grid
                .iter()
                .map(|tau| rs.iter().filter(|r| **r <= *tau).count() as f64 / count)
                .collect();
            (*spec, curve)
        })
        .collect();
    Ok(ProfileTable {
        metric,
        tau_grid: grid,
        rho,
        included_instances: included,
        ratios,
    })
}

/// Long-format CSV: `metric,solver,tau,rho`, one row per solver and grid point.
pub fn write_profile<W: Write>(mut out: W, table: &ProfileTable) -> Result<()> {
    writeln!(
        out,
        "# curvesearch profile v1 metric={} instances={}",
        table.metric.as_str(),
        table.included_instances.len()
    )?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["metric", "solver", "tau", "rho"])
        .map_err(io)?;
    for (spec, curve) in &table.rho {
        for (tau, rho) in table.tau_grid.iter().zip(curve) {
            w.write_record([
                table.metric.as_str().to_string(),
                spec.label(),
                tau.to_string(),
                rho.to_string(),
            ])
            .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Instances whose solution lies on the boundary: the final point of the
/// successful run with the lowest `f*` has `max_i g_i >= -tol`. Instances
/// without a successful run are left out.
pub fn boundary_subset(records: &[RecordRow], tol: f64) -> Vec<String> {
    by_instance(records)
        .into_iter()
        .filter_map(|(instance, rows)| {
            let best = rows
                .iter()
                .filter(|r| r.status.is_success())
                .min_by(|a, b| a.f_star.total_cmp(&b.f_star))?;
            (best.max_g_final >= -tol).then_some(instance)
        })
        .collect()
}
