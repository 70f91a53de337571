//! Smooth objectives with analytic gradients.
//!
//! The registry mirrors a classical unconstrained test set (Rosenbrock,
//! Wood, Powell, Fletcher, Engvall and friends) at dimensions from 2 to
//! 1000. Every function documents its starting point.

mod functions;

pub use functions::{
    ArgLinA, Beale, ChainedWood, DiagonalQuadratic, EngVal1, ExtendedPowell, ExtendedRosenbrock,
    FletcherCr, FnProblem, FreudensteinRoth, GenHumps, Rosenbrock, Tridia, TrigSum,
};

use crate::{Error, Result, Vector};

/// Objective `f: R^n -> R` with its gradient.
///
/// Implementations must be deterministic and pure so a problem can be
/// evaluated from several threads at once.
pub trait SmoothProblem: Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn eval_f(&self, x: &[f64]) -> f64;
    fn eval_grad(&self, x: &[f64]) -> Vector;
    /// Classical starting point, before projection onto any feasible set.
    fn start(&self) -> Vector;

    /// Sum of the element functions of `f` that depend on coordinate `i`.
    ///
    /// Differences of this partial sum along `e_i` equal differences of `f`,
    /// without the rounding noise of the terms that do not move. `None` means
    /// the objective is not partially separable and `eval_f` is used instead.
    fn coordinate_terms(&self, _x: &[f64], _i: usize) -> Option<f64> {
        None
    }
}

/// The shipped desk-scale suite.
pub fn list_problems() -> Vec<Box<dyn SmoothProblem>> {
    vec![
        Box::new(Rosenbrock),
        Box::new(Beale),
        Box::new(FreudensteinRoth),
        Box::new(ChainedWood::new(4)),
        Box::new(ChainedWood::new(100)),
        Box::new(DiagonalQuadratic::new(50)),
        Box::new(DiagonalQuadratic::new(500)),
        Box::new(ExtendedPowell::new(100)),
        Box::new(TrigSum::new(20)),
        Box::new(ArgLinA::new(200)),
        Box::new(GenHumps::new(100)),
        Box::new(Tridia::new(1000)),
        Box::new(EngVal1::new(1000)),
        Box::new(FletcherCr::new(1000)),
        Box::new(ExtendedRosenbrock::new(1000)),
    ]
}

pub fn problem_names() -> Vec<String> {
    list_problems()
        .iter()
        .map(|p| p.name().to_string())
        .collect()
}

pub fn problem_by_name(name: &str) -> Result<Box<dyn SmoothProblem>> {
    list_problems()
        .into_iter()
        .find(|p| p.name() == name)
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

/// Largest per-coordinate error between the analytic gradient and central
/// differences with step `h`, measured as `|g_i - fd_i| / max(1, |g_i|)`.
///
/// Partially separable problems are differenced through
/// [`SmoothProblem::coordinate_terms`].
pub fn check_gradient(p: &dyn SmoothProblem, x: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if x.len() != p.dim() {
        return Err(Error::Domain(format!(
            "point has length {} but `{}` has dimension {}",
            x.len(),
            p.name(),
            p.dim()
        )));
    }
    if !crate::linalg::all_finite(x) {
        return Err(Error::Domain("point has non-finite coordinates".into()));
    }
    let grad = p.eval_grad(x);
    let mut probe = x.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        let eval = |v: &[f64]| p.coordinate_terms(v, i).unwrap_or_else(|| p.eval_f(v));
        probe[i] = x[i] + h;
        let fp = eval(&probe);
        probe[i] = x[i] - h;
        let fm = eval(&probe);
        probe[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::EvaluationDomain(format!(
                "`{}` at coordinate {i} shifted by ±{h}",
                p.name()
            )));
        }
        let fd = (fp - fm) / (2.0 * h);
        let err = (grad[i] - fd).abs() / grad[i].abs().max(1.0);
        worst = worst.max(err);
    }
    Ok(worst)
}
