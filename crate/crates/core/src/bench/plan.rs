use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::problems::problem_names;
use crate::sets::SET_NAMES;
use crate::solvers::{SolverConfig, SolverKind};
use crate::{Error, Result};

/// One solver column of a benchmark: the method and its memory `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub solver: SolverKind,
    #[serde(rename = "M", alias = "memory")]
    pub memory: usize,
}

impl SolverSpec {
    pub fn new(solver: SolverKind, memory: usize) -> Self {
        Self { solver, memory }
    }

    /// `SCS(M=10)` style label used in profile output.
    pub fn label(&self) -> String {
        format!("{}(M={})", self.solver, self.memory)
    }
}

/// Optional changes to [`SolverConfig::default`]. Unset fields keep the default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub delta: Option<f64>,
    pub sigma: Option<f64>,
    pub alpha: Option<f64>,
    pub beta0: Option<f64>,
    pub t_tilde: Option<f64>,
    pub eps0: Option<f64>,
    pub eps_decay: Option<f64>,
    pub eta0: Option<f64>,
    pub eta_min: Option<f64>,
    pub eta_max: Option<f64>,
    pub stat_tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub time_limit_s: Option<f64>,
    pub max_backtracks: Option<usize>,
    pub adaptive_momentum: Option<bool>,
    pub dynamic_beta: Option<bool>,
}

impl ConfigOverrides {
    pub fn apply(&self, mut cfg: SolverConfig) -> Result<SolverConfig> {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        set!(
            delta,
            sigma,
            alpha,
            beta0,
            t_tilde,
            eps0,
            eps_decay,
            eta_min,
            eta_max,
            stat_tol,
            max_iters,
            max_backtracks,
            adaptive_momentum,
            dynamic_beta
        );
        if self.eta0.is_some() {
            cfg.eta0 = self.eta0;
        }
        if let Some(s) = self.time_limit_s {
            cfg.time_limit = Duration::try_from_secs_f64(s)
                .map_err(|_| Error::Plan(format!("time_limit_s = {s} is not a valid duration")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A benchmark sweep, usually read from a TOML file:
///
/// ```toml
/// problems = ["rosenbrock-2", "chainwoo-4"]   # or ["all"]
/// sets = ["sph", "box"]                       # or ["all"]
/// seed = 7
/// solvers = [{ solver = "SCS", M = 0 }, { solver = "SPG", M = 10 }]
///
/// [overrides]
/// max_iters = 2000
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchPlan {
    pub problems: Vec<String>,
    pub sets: Vec<String>,
    pub solvers: Vec<SolverSpec>,
    #[serde(default)]
    pub overrides: ConfigOverrides,
    /// Where records go when the caller does not say otherwise.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Seeds the random ellipsoid shapes.
    #[serde(default)]
    pub seed: u64,
}

const ALL: &str = "all";

impl BenchPlan {
    /// The full protocol: every problem and set with SCS and SPG at `M = 0, 10`.
    pub fn full(seed: u64) -> Self {
        Self {
            problems: vec![ALL.into()],
            sets: vec![ALL.into()],
            solvers: vec![
                SolverSpec::new(SolverKind::Scs, 0),
                SolverSpec::new(SolverKind::Scs, 10),
                SolverSpec::new(SolverKind::Spg, 0),
                SolverSpec::new(SolverKind::Spg, 10),
            ],
            overrides: ConfigOverrides::default(),
            output: None,
            seed,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let plan: Self = toml::from_str(text).map_err(|e| Error::Format {
            what: "plan file",
            reason: e.to_string(),
        })?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plans always serialize")
    }

    /// Resolve every name and the solver configuration without running anything.
    pub fn validate(&self) -> Result<()> {
        if self.solvers.is_empty() {
            return Err(Error::Plan("solver list is empty".into()));
        }
        if self.problems.is_empty() {
            return Err(Error::Plan("problem list is empty".into()));
        }
        if self.sets.is_empty() {
            return Err(Error::Plan("set list is empty".into()));
        }
        let known = problem_names();
        if let Some(p) = self
            .problems
            .iter()
            .find(|p| *p != ALL && !known.contains(p))
        {
            return Err(Error::UnknownProblem(p.clone()));
        }
        if let Some(s) = self
            .sets
            .iter()
            .find(|s| *s != ALL && !SET_NAMES.contains(&s.as_str()))
        {
            return Err(Error::UnknownSet(s.clone()));
        }
        self.config().map(|_| ())
    }

    pub fn config(&self) -> Result<SolverConfig> {
        self.overrides.apply(SolverConfig::default())
    }

    /// Problem names with `all` expanded, in plan order without repeats.
    pub fn problem_list(&self) -> Vec<String> {
        expand(&self.problems, problem_names())
    }

    pub fn set_list(&self) -> Vec<String> {
        expand(
            &self.sets,
            SET_NAMES.iter().map(|s| s.to_string()).collect(),
        )
    }
}

fn expand(names: &[String], all: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for name in names {
        let items = if name == ALL {
            all.clone()
        } else {
            vec![name.clone()]
        };
        for item in items {
            if !out.contains(&item) {
                out.push(item);
            }
        }
    }
    out
}
