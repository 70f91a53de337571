use std::time::Instant;

use super::{
    build_secondary_direction, initial_eta, non_descent, projected_step, spectral_eta,
    stationarity_with_grad, IterationEvent, ObjectiveMemory, RunFrame, RunRecord, RunStatus,
    SolverConfig, SolverKind,
};
use crate::curves::{feasibility_certificate, CurveDecision, QuadraticCurve};
use crate::linalg::{dot, sub};
use crate::problems::SmoothProblem;
use crate::sets::ConvexFeasibleSet;
use crate::{Error, FailedCondition, Result, Vector, FEAS_TOL};

/// Accepted point of a curve search.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveStep {
    pub t: f64,
    pub x_next: Vector,
    pub f_next: f64,
    pub backtracks: usize,
}

/// Backtracking search along `curve`: the first `t = δ^h` with
/// `γ(t)` feasible and `f(γ(t)) <= f_ref + σ t ∇f(x)ᵀd`.
///
/// `f_ref` is `f(x)` for the monotone search and the maximum over the
/// objective window otherwise.
pub fn curve_search(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    curve: &QuadraticCurve,
    f_ref: f64,
    grad_dot_d: f64,
    cfg: &SolverConfig,
) -> Result<CurveStep> {
    if !(grad_dot_d < 0.0) {
        return Err(non_descent(grad_dot_d, curve.primary()));
    }
    let mut t = 1.0;
    let mut failed = FailedCondition::Feasibility;
    for h in 0..=cfg.max_backtracks {
        if h > 0 {
            t *= cfg.delta;
        }
        let p = curve.point(t);
        if set.max_g(&p) > FEAS_TOL {
            failed = FailedCondition::Feasibility;
            continue;
        }
        let fp = problem.eval_f(&p);
        if fp <= f_ref + cfg.sigma * t * grad_dot_d {
            if cfg.check_maximality && h > 0 {
                assert_not_acceptable(problem, set, curve, f_ref, grad_dot_d, t / cfg.delta, cfg);
            }
            return Ok(CurveStep {
                t,
                x_next: p,
                f_next: fp,
                backtracks: h,
            });
        }
        failed = FailedCondition::SufficientDecrease;
    }
    Err(Error::SearchFailure {
        stage: "curve search",
        backtracks: cfg.max_backtracks,
        last_trial: t,
        failed,
    })
}

fn assert_not_acceptable(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    curve: &QuadraticCurve,
    f_ref: f64,
    grad_dot_d: f64,
    t: f64,
    cfg: &SolverConfig,
) {
    let p = curve.point(t);
    let feasible = set.max_g(&p) <= FEAS_TOL;
    let decrease = problem.eval_f(&p) <= f_ref + cfg.sigma * t * grad_dot_d;
    assert!(
        !(feasible && decrease),
        "step {t:e} would have been accepted before the returned one"
    );
}

/// Result of the momentum reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumStep {
    pub s: Vector,
    pub beta_k: f64,
    /// Number of reductions `h`, so `beta_k = δ^h β`.
    pub reductions: usize,
}

/// Largest `δ^h β` such that `x + α d + δ^h β η (x - x_prev)` is feasible.
///
/// Terminates finitely whenever `α < 1` and `x + d` is feasible; exceeding
/// `max_backtracks` therefore signals a feasibility or projection problem.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_momentum(
    d: &[f64],
    x: &[f64],
    x_prev: &[f64],
    set: &dyn ConvexFeasibleSet,
    alpha: f64,
    beta: f64,
    eta: f64,
    delta: f64,
    max_backtracks: usize,
) -> Result<MomentumStep> {
    let mut b = beta;
    for h in 0..=max_backtracks {
        if h > 0 {
            b *= delta;
        }
        let s = build_secondary_direction(d, x, x_prev, alpha, b, eta);
        let endpoint: Vector = x.iter().zip(&s).map(|(a, c)| a + c).collect();
        if set.max_g(&endpoint) <= FEAS_TOL {
            return Ok(MomentumStep {
                s,
                beta_k: b,
                reductions: h,
            });
        }
    }
    Err(Error::SearchFailure {
        stage: "momentum reduction",
        backtracks: max_backtracks,
        last_trial: b,
        failed: FailedCondition::Feasibility,
    })
}

/// Run SCS from the projected start point of `problem`.
pub fn scs_solve(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    cfg: &SolverConfig,
) -> RunRecord {
    scs_solve_observed(problem, set, cfg, &mut |_| {})
}

/// [`scs_solve`] reporting every completed iteration to `observer`.
pub fn scs_solve_observed(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    cfg: &SolverConfig,
    observer: &mut dyn FnMut(&IterationEvent<'_>),
) -> RunRecord {
    let frame = RunFrame {
        solver: SolverKind::Scs,
        problem,
        set,
        cfg,
        start: Instant::now(),
    };
    if let Err(e) = cfg.validate() {
        let x = problem.start();
        let f = problem.eval_f(&x);
        return frame.finish(
            RunStatus::SearchFailure,
            x,
            f,
            f64::INFINITY,
            0,
            0,
            0,
            Some(e),
        );
    }
    let (mut x, mut f, mut grad) = match frame.feasible_start() {
        Ok(v) => v,
        Err(e) => {
            let x = problem.start();
            let f = problem.eval_f(&x);
            return frame.finish(
                RunFrame::failure_status(&e),
                x,
                f,
                f64::INFINITY,
                0,
                0,
                0,
                Some(e),
            );
        }
    };
    let mut x_prev = x.clone();
    let mut memory = ObjectiveMemory::new(cfg.memory, f);
    let mut eps = cfg.eps0;
    let mut beta = cfg.beta0;
    let mut eta = f64::NAN;
    let mut fallbacks = 0;
    let mut reductions = 0;
    let mut k = 0;

    loop {
        let stat = match stationarity_with_grad(set, &x, &grad) {
            Ok(v) => v,
            Err(e) => {
                return frame.finish(
                    RunFrame::failure_status(&e),
                    x,
                    f,
                    f64::INFINITY,
                    k,
                    fallbacks,
                    reductions,
                    Some(e),
                )
            }
        };
        if k == 0 {
            eta = initial_eta(cfg, stat);
        }
        if stat <= cfg.stat_tol {
            return frame.finish(
                RunStatus::Stationary,
                x,
                f,
                stat,
                k,
                fallbacks,
                reductions,
                None,
            );
        }
        if let Some(status) = frame.limit_reached(k) {
            return frame.finish(status, x, f, stat, k, fallbacks, reductions, None);
        }

        let step = match iterate(
            problem, set, cfg, &x, &x_prev, &grad, f, &memory, eta, eps, beta, k,
        ) {
            Ok(s) => s,
            Err(e) => {
                return frame.finish(
                    RunFrame::failure_status(&e),
                    x,
                    f,
                    stat,
                    k,
                    fallbacks,
                    reductions,
                    Some(e),
                )
            }
        };

        if step.fallback {
            fallbacks += 1;
        }
        if step.momentum.as_ref().is_some_and(|m| m.reductions > 0) {
            reductions += 1;
        }
        let grad_next = problem.eval_grad(&step.curve_step.x_next);
        observer(&IterationEvent {
            k,
            x: &x,
            x_prev: &x_prev,
            x_next: &step.curve_step.x_next,
            d: &step.d,
            s_candidate: &step.s_candidate,
            s: step.curve.secondary(),
            f,
            f_ref: step.f_ref,
            f_next: step.curve_step.f_next,
            grad_dot_d: step.grad_dot_d,
            t: step.curve_step.t,
            backtracks: step.curve_step.backtracks,
            eta,
            eps,
            beta,
            beta_k: step.momentum.as_ref().map(|m| m.beta_k),
            momentum_reductions: step.momentum.as_ref().map_or(0, |m| m.reductions),
            fallback: step.fallback,
            certificate: step.certificate,
            projection_required: step.projection_required,
            window: memory.len(),
        });

        let r = sub(&step.curve_step.x_next, &x);
        let y = sub(&grad_next, &grad);
        eta = spectral_eta(&r, &y, cfg.eta_min, cfg.eta_max);
        eps *= cfg.eps_decay;
        if cfg.dynamic_beta {
            beta = match &step.momentum {
                Some(m) => m.beta_k,
                None => cfg.beta0.min(beta / cfg.delta),
            };
        }
        x_prev = std::mem::replace(&mut x, step.curve_step.x_next);
        f = step.curve_step.f_next;
        grad = grad_next;
        memory.push(f);
        k += 1;
    }
}

struct ScsIteration {
    d: Vector,
    s_candidate: Vector,
    curve: QuadraticCurve,
    curve_step: CurveStep,
    f_ref: f64,
    grad_dot_d: f64,
    fallback: bool,
    certificate: Option<CurveDecision>,
    momentum: Option<MomentumStep>,
    projection_required: bool,
}

#[allow(clippy::too_many_arguments)]
fn iterate(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    cfg: &SolverConfig,
    x: &[f64],
    x_prev: &[f64],
    grad: &[f64],
    f: f64,
    memory: &ObjectiveMemory,
    eta: f64,
    eps: f64,
    beta: f64,
    k: usize,
) -> Result<ScsIteration> {
    let projected = projected_step(set, x, grad, eta)?;
    let d = projected.d;
    let grad_dot_d = dot(grad, &d);
    if !(grad_dot_d < 0.0) {
        return Err(non_descent(grad_dot_d, &d));
    }
    let s_candidate = build_secondary_direction(&d, x, x_prev, cfg.alpha, beta, eta);

    let (certificate, fallback) = if k == 0 {
        (None, true)
    } else {
        let probe = QuadraticCurve::new(x.to_vec(), d.clone(), s_candidate.clone())?;
        let decision = feasibility_certificate(&probe, set, cfg.t_tilde, eps)?;
        (Some(decision), decision == CurveDecision::FallBack)
    };

    let mut momentum = None;
    let s = if fallback {
        d.clone()
    } else if cfg.adaptive_momentum && projected.projected {
        let m = adaptive_momentum(
            &d,
            x,
            x_prev,
            set,
            cfg.alpha,
            beta,
            eta,
            cfg.delta,
            cfg.max_backtracks,
        )?;
        let s = m.s.clone();
        momentum = Some(m);
        s
    } else {
        s_candidate.clone()
    };

    let curve = if fallback {
        QuadraticCurve::straight_line(x.to_vec(), d.clone())
    } else {
        QuadraticCurve::new(x.to_vec(), d.clone(), s)?
    };
    let f_ref = if cfg.memory == 0 {
        f
    } else {
        memory.reference()
    };
    let curve_step = curve_search(problem, set, &curve, f_ref, grad_dot_d, cfg)?;
    Ok(ScsIteration {
        d,
        s_candidate,
        curve,
        curve_step,
        f_ref,
        grad_dot_d,
        fallback,
        certificate,
        momentum,
        projection_required: projected.projected,
    })
}
