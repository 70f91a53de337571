//! `bench`: run solver sweeps, build performance profiles, list boundary instances.

// `!(a < b)` is used deliberately so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use curvesearch::bench::{
    boundary_subset, performance_profile, read_records, run_plan, write_profile, write_records,
    BenchPlan, ProfileMetric, RecordRow, DEFAULT_BOUNDARY_TOL,
};
use curvesearch::problems::list_problems;
use curvesearch::sets::SET_NAMES;

#[derive(Parser)]
#[command(
    name = "bench",
    version,
    about = "Benchmark harness for the SCS and SPG solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (solver, problem, set) combination of a plan and write records.csv.
    Run {
        /// TOML plan file. Without one, runs the full protocol.
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Output directory; defaults to the plan's `output` or `results`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Seed for the random ellipsoid shapes; overrides the plan.
        #[arg(long, visible_alias = "ell-seed")]
        seed: Option<u64>,
        /// Comma-separated problem names; overrides the plan.
        #[arg(long, value_delimiter = ',')]
        problems: Option<Vec<String>>,
        /// Comma-separated set names (sph, ell, com, box); overrides the plan.
        #[arg(long, value_delimiter = ',')]
        sets: Option<Vec<String>>,
    },
    /// Dolan–Moré performance profile of a records file.
    Profile {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::Time)]
        metric: Metric,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated tau grid; defaults to every breakpoint.
        #[arg(long, value_delimiter = ',')]
        tau: Option<Vec<f64>>,
    },
    /// Instances whose best successful solution lies on the boundary.
    Boundary {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUNDARY_TOL)]
        tol: f64,
    },
    /// Print the registered problems and sets.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Time,
    Fstar,
    Iters,
}

impl From<Metric> for ProfileMetric {
    fn from(m: Metric) -> Self {
        match m {
            Metric::Time => ProfileMetric::Time,
            Metric::Fstar => ProfileMetric::FStar,
            Metric::Iters => ProfileMetric::Iterations,
        }
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed downstream pipe (`bench list | head`) is not an error.
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            plan,
            out,
            jobs,
            seed,
            problems,
            sets,
        } => {
            let mut plan = match plan {
                Some(path) => {
                    BenchPlan::load(&path).with_context(|| format!("loading {}", path.display()))?
                }
                None => BenchPlan::full(0),
            };
            if let Some(seed) = seed {
                plan.seed = seed;
            }
            if let Some(p) = problems {
                plan.problems = p;
            }
            if let Some(s) = sets {
                plan.sets = s;
            }
            plan.validate()?;
            let dir = out
                .or_else(|| plan.output.clone())
                .unwrap_or_else(|| PathBuf::from("results"));
            run(&plan, &dir, jobs)
        }
        Command::Profile {
            records,
            metric,
            out,
            tau,
        } => {
            let rows = load(&records)?;
            let table = performance_profile(&rows, metric.into(), tau.as_deref())?;
            match out {
                Some(path) => {
                    let file = File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    write_profile(BufWriter::new(file), &table)?;
                    eprintln!(
                        "profile over {} instances written to {}",
                        table.included_instances.len(),
                        path.display()
                    );
                }
                None => {
                    let mut buf = Vec::new();
                    write_profile(&mut buf, &table)?;
                    io::stdout().lock().write_all(&buf)?;
                }
            }
            Ok(())
        }
        Command::Boundary { records, tol } => {
            if !(tol >= 0.0) {
                bail!("--tol must be non-negative");
            }
            let rows = load(&records)?;
            let mut stdout = io::stdout().lock();
            for instance in boundary_subset(&rows, tol) {
                writeln!(stdout, "{instance}")?;
            }
            Ok(())
        }
        Command::List => {
            let mut stdout = io::stdout().lock();
            for p in list_problems() {
                writeln!(stdout, "problem {} n={}", p.name(), p.dim())?;
            }
            for s in SET_NAMES {
                writeln!(stdout, "set {s}")?;
            }
            Ok(())
        }
    }
}

fn run(plan: &BenchPlan, dir: &Path, jobs: usize) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let records = run_plan(plan, jobs)?;
    let rows: Vec<RecordRow> = records.iter().map(RecordRow::from).collect();
    let path = dir.join("records.csv");
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_records(BufWriter::new(file), &rows)?;
    fs::write(dir.join("plan.toml"), plan.to_toml())?;

    let solved = rows.iter().filter(|r| r.status.is_success()).count();
    println!("{} runs, {solved} stationary", rows.len());
    for r in records.iter().filter(|r| r.error.is_some()) {
        println!(
            "  {} {}/{} {}: {}",
            r.solver.as_str(),
            r.problem,
            r.set,
            r.status,
            r.error.as_ref().expect("filtered")
        );
    }
    println!("records written to {}", path.display());
    Ok(())
}

fn load(path: &Path) -> Result<Vec<RecordRow>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_records(file)?)
}
