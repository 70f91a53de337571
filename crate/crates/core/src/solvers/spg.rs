use std::time::Instant;

use super::{
    initial_eta, non_descent, projected_step, spectral_eta, stationarity_with_grad, IterationEvent,
    ObjectiveMemory, RunFrame, RunRecord, RunStatus, SolverConfig, SolverKind,
};
use crate::linalg::{dot, sub};
use crate::problems::SmoothProblem;
use crate::sets::ConvexFeasibleSet;
use crate::{Error, FailedCondition, Result, Vector};

/// Run the spectral projected gradient method from the projected start point.
pub fn spg_solve(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    cfg: &SolverConfig,
) -> RunRecord {
    spg_solve_observed(problem, set, cfg, &mut |_| {})
}

/// [`spg_solve`] reporting every completed iteration to `observer`.
pub fn spg_solve_observed(
    problem: &dyn SmoothProblem,
    set: &dyn ConvexFeasibleSet,
    cfg: &SolverConfig,
    observer: &mut dyn FnMut(&IterationEvent<'_>),
) -> RunRecord {
    let frame = RunFrame {
        solver: SolverKind::Spg,
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
    let mut eta = f64::NAN;
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
                    0,
                    0,
                    Some(e),
                )
            }
        };
        if k == 0 {
            eta = initial_eta(cfg, stat);
        }
        if stat <= cfg.stat_tol {
            return frame.finish(RunStatus::Stationary, x, f, stat, k, 0, 0, None);
        }
        if let Some(status) = frame.limit_reached(k) {
            return frame.finish(status, x, f, stat, k, 0, 0, None);
        }

        let f_ref = memory.reference();
        let step = projected_step(set, &x, &grad, eta).and_then(|p| {
            let gtd = dot(&grad, &p.d);
            let line = interpolation_search(problem, &x, &p.d, f_ref, gtd, cfg)?;
            Ok((p, gtd, line))
        });
        let (projected, gtd, (lambda, x_next, f_next, backtracks)) = match step {
            Ok(v) => v,
            Err(e) => {
                return frame.finish(RunFrame::failure_status(&e), x, f, stat, k, 0, 0, Some(e))
            }
        };

        let grad_next = problem.eval_grad(&x_next);
        observer(&IterationEvent {
            k,
            x: &x,
            x_prev: &x_prev,
            x_next: &x_next,
            d: &projected.d,
            s_candidate: &projected.d,
            s: &projected.d,
            f,
            f_ref,
            f_next,
            grad_dot_d: gtd,
            t: lambda,
            backtracks,
            eta,
            eps: 0.0,
            beta: 0.0,
            beta_k: None,
            momentum_reductions: 0,
            fallback: false,
            certificate: None,
            projection_required: projected.projected,
            window: memory.len(),
        });

        eta = spectral_eta(
            &sub(&x_next, &x),
            &sub(&grad_next, &grad),
            cfg.eta_min,
            cfg.eta_max,
        );
        x_prev = std::mem::replace(&mut x, x_next);
        f = f_next;
        grad = grad_next;
        memory.push(f);
        k += 1;
    }
}

/// Non-monotone backtracking along `x + λ d` with safeguarded quadratic
/// interpolation. Every trial is feasible by convexity.
fn interpolation_search(
    problem: &dyn SmoothProblem,
    x: &[f64],
    d: &[f64],
    f_ref: f64,
    gtd: f64,
    cfg: &SolverConfig,
) -> Result<(f64, Vector, f64, usize)> {
    if !(gtd < 0.0) {
        return Err(non_descent(gtd, d));
    }
    let f0 = problem.eval_f(x);
    let mut lambda = 1.0;
    for h in 0..=cfg.max_backtracks {
        let trial: Vector = x.iter().zip(d).map(|(xi, di)| xi + lambda * di).collect();
        let ft = problem.eval_f(&trial);
        if ft <= f_ref + cfg.sigma * lambda * gtd {
            return Ok((lambda, trial, ft, h));
        }
        if h == cfg.max_backtracks {
            break;
        }
        lambda = interpolate(lambda, f0, ft, gtd, cfg);
    }
    Err(Error::SearchFailure {
        stage: "spg line search",
        backtracks: cfg.max_backtracks,
        last_trial: lambda,
        failed: FailedCondition::SufficientDecrease,
    })
}

/// Minimiser of the quadratic through `f(x)`, slope `gtd` and `f(x + λd)`,
/// kept inside `[lo·λ, hi·λ]`.
fn interpolate(lambda: f64, f0: f64, ft: f64, gtd: f64, cfg: &SolverConfig) -> f64 {
    let lo = cfg.interp_lo * lambda;
    let hi = cfg.interp_hi * lambda;
    let cand = -lambda * lambda * gtd / (2.0 * (ft - f0 - lambda * gtd));
    if cand.is_finite() {
        cand.clamp(lo, hi)
    } else {
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{DiagonalQuadratic, Rosenbrock};
    use crate::sets::{make_sphere, BoxSet};

    #[test]
    fn interpolation_is_safeguarded() {
        let cfg = SolverConfig::default();
        // f(λ) = (λ - 0.3)^2 from f0 = 0.09, slope -0.6: exact minimiser 0.3.
        let lam = interpolate(1.0, 0.09, 0.49, -0.6, &cfg);
        assert!((lam - 0.3).abs() < 1e-15);
        // Minimiser past hi·λ is clamped.
        assert_eq!(interpolate(1.0, 1.0, 1.0 - 0.5, -1.0, &cfg), 0.9);
        assert_eq!(interpolate(1.0, 0.0, f64::INFINITY, -1.0, &cfg), 0.1);
        assert_eq!(interpolate(1.0, 0.0, f64::NAN, -1.0, &cfg), 0.1);
    }

    #[test]
    fn solves_box_quadratic() {
        let q = DiagonalQuadratic::new(20);
        let b = BoxSet::new(20, 0.5, 2.0).unwrap();
        let rec = spg_solve(&q, &b, &SolverConfig::default());
        assert_eq!(rec.status, RunStatus::Stationary);
        let want: f64 = (0..20).map(|i| (i + 1) as f64 * 0.25).sum();
        assert!(
            (rec.f_star - want).abs() < 1e-3 * want,
            "{} vs {want}",
            rec.f_star
        );
    }

    #[test]
    fn iterates_stay_feasible() {
        let p = Rosenbrock;
        let s = make_sphere(2);
        let mut worst: f64 = f64::NEG_INFINITY;
        let rec = spg_solve_observed(&p, &s, &SolverConfig::default().with_memory(10), &mut |e| {
            worst = worst.max(s.max_g(e.x_next));
        });
        assert!(worst <= crate::FEAS_TOL);
        assert_eq!(rec.fallbacks, 0);
        assert!(rec.status.is_success());
    }
}
