use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::solvers::{RunRecord, RunStatus, SolverKind};
use crate::{Error, Result};

/// First line of every records file. Bump the version when columns change.
pub const RECORDS_HEADER: &str = "# curvesearch records v1";

/// The persisted part of a [`RunRecord`]: one CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordRow {
    pub solver: SolverKind,
    #[serde(rename = "M")]
    pub memory: usize,
    pub problem: String,
    pub set: String,
    pub n: usize,
    pub status: RunStatus,
    pub f_star: f64,
    pub stationarity: f64,
    pub iterations: usize,
    pub fallbacks: usize,
    pub adaptive_reductions: usize,
    pub elapsed_s: f64,
    pub max_g_final: f64,
}

impl RecordRow {
    pub fn instance(&self) -> String {
        super::instance_id(&self.problem, &self.set)
    }
}

impl From<&RunRecord> for RecordRow {
    fn from(r: &RunRecord) -> Self {
        Self {
            solver: r.solver,
            memory: r.memory,
            problem: r.problem.clone(),
            set: r.set.clone(),
            n: r.n,
            status: r.status,
            f_star: r.f_star,
            stationarity: r.stationarity,
            iterations: r.iterations,
            fallbacks: r.fallbacks,
            adaptive_reductions: r.adaptive_reductions,
            elapsed_s: r.elapsed_s,
            max_g_final: r.max_g_final,
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format {
        what: "records file",
        reason: e.to_string(),
    }
}

pub fn write_records<W: Write>(mut out: W, rows: &[RecordRow]) -> Result<()> {
    writeln!(out, "{RECORDS_HEADER}")?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a file produced by [`write_records`]. Comment lines start with `#`.
pub fn read_records<R: Read>(input: R) -> Result<Vec<RecordRow>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> RecordRow {
        RecordRow {
            solver: SolverKind::Scs,
            memory: 10,
            problem: "rosenbrock-2".into(),
            set: "box".into(),
            n: 2,
            status: RunStatus::Stationary,
            f_star: 0.125,
            stationarity: 1e-4,
            iterations: 12,
            fallbacks: 1,
            adaptive_reductions: 0,
            elapsed_s: 0.5,
            max_g_final: -0.25,
        }
    }

    #[test]
    fn exact_column_order() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[row()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], RECORDS_HEADER);
        assert_eq!(
            lines[1],
            "solver,M,problem,set,n,status,f_star,stationarity,iterations,fallbacks,adaptive_reductions,elapsed_s,max_g_final"
        );
        assert_eq!(
            lines[2],
            "SCS,10,rosenbrock-2,box,2,stationary,0.125,0.0001,12,1,0,0.5,-0.25"
        );
    }

    #[test]
    fn round_trip() {
        let mut second = row();
        second.status = RunStatus::SearchFailure;
        second.f_star = f64::INFINITY;
        let mut buf = Vec::new();
        write_records(&mut buf, &[row(), second.clone()]).unwrap();
        assert_eq!(read_records(buf.as_slice()).unwrap(), vec![row(), second]);
    }

    #[test]
    fn malformed_rows_are_reported() {
        let text = format!("{RECORDS_HEADER}\nsolver,M\nFW,0\n");
        assert!(matches!(
            read_records(text.as_bytes()),
            Err(Error::Format { .. })
        ));
    }
}
