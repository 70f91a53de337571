//! The curve-search solver (SCS) and the spectral projected gradient
//! baseline (SPG).
//!
//! Both solvers share the projected spectral direction
//! `d_k = Π[x_k - η_k ∇f(x_k)] - x_k`, the safeguarded spectral steplength,
//! the stopping rules and the [`RunRecord`] they produce. SCS searches along
//! the quadratic curve `x_k + t d_k + t² (s_k - d_k)` built from a heavy-ball
//! direction `s_k`; SPG backtracks along `d_k` with quadratic interpolation.

mod scs;
mod spg;
mod trace;

pub use scs::{
    adaptive_momentum, curve_search, scs_solve, scs_solve_observed, CurveStep, MomentumStep,
};
pub use spg::{spg_solve, spg_solve_observed};
pub use trace::{IterationEvent, Trace, TraceEntry};

use std::collections::VecDeque;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, norm};
use crate::problems::SmoothProblem;
use crate::sets::ConvexFeasibleSet;
use crate::{Error, Result, Vector};

/// Solver parameters. [`Default`] gives the published experimental setting.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Backtracking factor for steps and for momentum reduction.
    pub delta: f64,
    /// Sufficient-decrease constant.
    pub sigma: f64,
    /// Weight of `d_k` in the heavy-ball direction.
    pub alpha: f64,
    /// Initial (and maximal) momentum weight.
    pub beta0: f64,
    /// Probe fraction along `d_k` for the active-set estimate.
    pub t_tilde: f64,
    pub eps0: f64,
    pub eps_decay: f64,
    /// Non-monotone memory; 0 gives the monotone search.
    pub memory: usize,
    /// Initial spectral steplength. `None` uses `1 / ‖Π[x0 - ∇f(x0)] - x0‖∞`.
    pub eta0: Option<f64>,
    pub eta_min: f64,
    pub eta_max: f64,
    pub stat_tol: f64,
    pub max_iters: usize,
    pub time_limit: Duration,
    pub max_backtracks: usize,
    pub adaptive_momentum: bool,
    pub dynamic_beta: bool,
    /// Safeguard interval `[lo·λ, hi·λ]` for the SPG interpolation step.
    pub interp_lo: f64,
    pub interp_hi: f64,
    /// Re-evaluate `t_k / δ` after each accepted step shorter than 1 and
    /// panic if it would also have been accepted.
    pub check_maximality: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            delta: 0.5,
            sigma: 1e-7,
            alpha: 0.999,
            beta0: 0.9,
            t_tilde: 0.5,
            eps0: 0.1,
            eps_decay: 0.95,
            memory: 0,
            eta0: None,
            eta_min: 1e-3,
            eta_max: 1e3,
            stat_tol: 1e-3,
            max_iters: 5000,
            time_limit: Duration::from_secs(120),
            max_backtracks: 60,
            adaptive_momentum: true,
            dynamic_beta: true,
            interp_lo: 0.1,
            interp_hi: 0.9,
            check_maximality: false,
        }
    }
}

impl SolverConfig {
    pub fn with_memory(mut self, memory: usize) -> Self {
        self.memory = memory;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        let checks = [
            (open_unit(self.delta), "delta must lie in (0, 1)"),
            (open_unit(self.sigma), "sigma must lie in (0, 1)"),
            (open_unit(self.alpha), "alpha must lie in (0, 1)"),
            (self.beta0 > 0.0, "beta0 must be positive"),
            (open_unit(self.t_tilde), "t_tilde must lie in (0, 1)"),
            (self.eps0 > 0.0, "eps0 must be positive"),
            (open_unit(self.eps_decay), "eps_decay must lie in (0, 1)"),
            (
                self.eta_min > 0.0 && self.eta_min < self.eta_max,
                "need 0 < eta_min < eta_max",
            ),
            (self.eta0.is_none_or(|e| e > 0.0), "eta0 must be positive"),
            (self.stat_tol >= 0.0, "stat_tol must be non-negative"),
            (
                self.interp_lo > 0.0 && self.interp_lo <= self.interp_hi && self.interp_hi < 1.0,
                "need 0 < interp_lo <= interp_hi < 1",
            ),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::Domain((*msg).to_string())),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolverKind {
    #[serde(rename = "SCS", alias = "scs")]
    Scs,
    #[serde(rename = "SPG", alias = "spg")]
    Spg,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Scs => "SCS",
            SolverKind::Spg => "SPG",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "scs" => Ok(SolverKind::Scs),
            "spg" => Ok(SolverKind::Spg),
            other => Err(Error::Plan(format!("unknown solver `{other}`"))),
        }
    }

    pub fn solve(
        &self,
        problem: &dyn SmoothProblem,
        set: &dyn ConvexFeasibleSet,
        cfg: &SolverConfig,
    ) -> RunRecord {
        match self {
            SolverKind::Scs => scs_solve(problem, set, cfg),
            SolverKind::Spg => spg_solve(problem, set, cfg),
        }
    }

    pub fn solve_observed(
        &self,
        problem: &dyn SmoothProblem,
        set: &dyn ConvexFeasibleSet,
        cfg: &SolverConfig,
        observer: &mut dyn FnMut(&IterationEvent<'_>),
    ) -> RunRecord {
        match self {
            SolverKind::Scs => scs_solve_observed(problem, set, cfg, observer),
            SolverKind::Spg => spg_solve_observed(problem, set, cfg, observer),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Stationary,
    IterLimit,
    TimeLimit,
    SearchFailure,
    ProjectionFailure,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Stationary => "stationary",
            RunStatus::IterLimit => "iter_limit",
            RunStatus::TimeLimit => "time_limit",
            RunStatus::SearchFailure => "search_failure",
            RunStatus::ProjectionFailure => "projection_failure",
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, RunStatus::Stationary)
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one solver run on one (problem, set) instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub solver: SolverKind,
    pub memory: usize,
    pub problem: String,
    pub set: String,
    pub n: usize,
    pub status: RunStatus,
    pub f_star: f64,
    pub stationarity: f64,
    pub iterations: usize,
    /// Iterations whose curve degenerated to the line along `d_k`,
    /// including the first one.
    pub fallbacks: usize,
    /// Iterations where the momentum weight had to be reduced.
    pub adaptive_reductions: usize,
    pub elapsed_s: f64,
    pub max_g_final: f64,
    pub x_final: Vector,
    /// Diagnostic for failed runs.
    pub error: Option<Error>,
}

/// `‖Π[x - ∇f(x)] - x‖∞`; zero exactly at stationary points.
pub fn stationarity_measure(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    x: &[f64],
) -> Result<f64> {
    stationarity_with_grad(set, x, &problem.eval_grad(x))
}

pub(crate) fn stationarity_with_grad(
    set: &dyn ConvexFeasibleSet,
    x: &[f64],
    grad: &[f64],
) -> Result<f64> {
    let z: Vector = x.iter().zip(grad).map(|(xi, gi)| xi - gi).collect();
    let p = set.project(&z)?;
    Ok(p.iter()
        .zip(x)
        .fold(0.0, |m, (pi, xi)| m.max((pi - xi).abs())))
}

/// `d = Π[x - η ∇f(x)] - x`.
pub fn spg_direction(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    x: &[f64],
    eta: f64,
) -> Result<Vector> {
    Ok(projected_step(set, x, &problem.eval_grad(x), eta)?.d)
}

pub(crate) struct ProjectedStep {
    pub d: Vector,
    /// Whether the projection moved `x - η∇f(x)`.
    pub projected: bool,
}

/// Threshold on `‖z - Π[z]‖` above which a projection counts as required.
const PROJECTION_MOVED: f64 = 1e-12;

pub(crate) fn projected_step(
    set: &dyn ConvexFeasibleSet,
    x: &[f64],
    grad: &[f64],
    eta: f64,
) -> Result<ProjectedStep> {
    let z: Vector = x.iter().zip(grad).map(|(xi, gi)| xi - eta * gi).collect();
    let p = set.project(&z)?;
    let moved = p
        .iter()
        .zip(&z)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(ProjectedStep {
        d: p.iter().zip(x).map(|(pi, xi)| pi - xi).collect(),
        projected: moved > PROJECTION_MOVED,
    })
}

/// Safeguarded `rᵀr / rᵀy`. Non-positive curvature `rᵀy <= 0` yields `eta_max`.
pub fn spectral_eta(r: &[f64], y: &[f64], eta_min: f64, eta_max: f64) -> f64 {
    let ry = dot(r, y);
    if !(ry > 0.0) {
        return eta_max;
    }
    (dot(r, r) / ry).clamp(eta_min, eta_max)
}

/// `α d + β η (x - x_prev)`.
pub fn build_secondary_direction(
    d: &[f64],
    x: &[f64],
    x_prev: &[f64],
    alpha: f64,
    beta: f64,
    eta: f64,
) -> Vector {
    let w = beta * eta;
    d.iter()
        .zip(x.iter().zip(x_prev))
        .map(|(di, (xi, pi))| alpha * di + w * (xi - pi))
        .collect()
}

pub(crate) fn initial_eta(cfg: &SolverConfig, stationarity0: f64) -> f64 {
    cfg.eta0
        .unwrap_or_else(|| (1.0 / stationarity0).clamp(cfg.eta_min, cfg.eta_max))
}

/// Window of the last `m(k) + 1` objective values, `m(k+1) = min(m(k)+1, M)`.
#[derive(Debug, Clone)]
pub(crate) struct ObjectiveMemory {
    values: VecDeque<f64>,
    capacity: usize,
}

impl ObjectiveMemory {
    pub fn new(memory: usize, f0: f64) -> Self {
        let mut values = VecDeque::with_capacity(memory + 1);
        values.push_back(f0);
        Self {
            values,
            capacity: memory + 1,
        }
    }

    pub fn reference(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn push(&mut self, f: f64) {
        if self.values.len() == self.capacity {
            self.values.pop_front();
        }
        self.values.push_back(f);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
}

/// Bookkeeping shared by both solvers.
pub(crate) struct RunFrame<'a> {
    pub solver: SolverKind,
    pub problem: &'a dyn SmoothProblem,
    pub set: &'a dyn ConvexFeasibleSet,
    pub cfg: &'a SolverConfig,
    pub start: std::time::Instant,
}

impl RunFrame<'_> {
    #[allow(clippy::too_many_arguments)]
    pub fn finish(
        &self,
        status: RunStatus,
        x: Vector,
        f: f64,
        stationarity: f64,
        iterations: usize,
        fallbacks: usize,
        adaptive_reductions: usize,
        error: Option<Error>,
    ) -> RunRecord {
        RunRecord {
            solver: self.solver,
            memory: self.cfg.memory,
            problem: self.problem.name().to_string(),
            set: self.set.name().to_string(),
            n: self.problem.dim(),
            status,
            f_star: f,
            stationarity,
            iterations,
            fallbacks,
            adaptive_reductions,
            elapsed_s: self.start.elapsed().as_secs_f64(),
            max_g_final: self.set.max_g(&x),
            x_final: x,
            error,
        }
    }

    pub fn failure_status(err: &Error) -> RunStatus {
        match err {
            Error::ProjectionFailure { .. } => RunStatus::ProjectionFailure,
            _ => RunStatus::SearchFailure,
        }
    }

    /// Project the start point, returning it with `f` and `∇f`.
    pub fn feasible_start(&self) -> Result<(Vector, f64, Vector)> {
        let x0 = self.set.project(&self.problem.start())?;
        let f0 = self.problem.eval_f(&x0);
        if !f0.is_finite() {
            return Err(Error::EvaluationDomain(format!(
                "`{}` at its projected start point",
                self.problem.name()
            )));
        }
        let g0 = self.problem.eval_grad(&x0);
        Ok((x0, f0, g0))
    }

    /// Stopping rule other than stationarity, checked at the top of iteration `k`.
    pub fn limit_reached(&self, k: usize) -> Option<RunStatus> {
        if k >= self.cfg.max_iters {
            Some(RunStatus::IterLimit)
        } else if self.start.elapsed() >= self.cfg.time_limit {
            Some(RunStatus::TimeLimit)
        } else {
            None
        }
    }
}

pub(crate) fn non_descent(grad_dot_d: f64, d: &[f64]) -> Error {
    Error::Contract(format!(
        "direction is not a descent direction (∇fᵀd = {grad_dot_d:e}, ‖d‖ = {:e})",
        norm(d)
    ))
}
