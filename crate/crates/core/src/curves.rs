//! Quadratic search curves `γ(t) = x + t d + t² (s - d)`.
//!
//! In Bernstein form the same curve has control points `P0 = x`,
//! `P1 = x + d/2` and `P2 = x + s`, so `γ(0) = x`, `γ'(0) = d` and
//! `γ(1) = x + s`. When `s == d` the curve is the straight segment `x + t d`
//! and is evaluated as such, bit for bit.

use crate::sets::{active_set, ConvexFeasibleSet};
use crate::{Error, Result, Vector, FEAS_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticCurve {
    x: Vector,
    d: Vector,
    s: Vector,
    straight: bool,
}

fn check_t(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "curve parameter must lie in [0, 1], got {t}"
        )))
    }
}

impl QuadraticCurve {
    pub fn new(x: Vector, d: Vector, s: Vector) -> Result<Self> {
        if x.len() != d.len() || x.len() != s.len() {
            return Err(Error::Domain(
                "curve base point and directions differ in length".into(),
            ));
        }
        let straight = s == d;
        Ok(Self { x, d, s, straight })
    }

    /// Degenerate curve with `s = d`.
    pub fn straight_line(x: Vector, d: Vector) -> Self {
        assert_eq!(x.len(), d.len());
        Self {
            s: d.clone(),
            x,
            d,
            straight: true,
        }
    }

    pub fn base(&self) -> &[f64] {
        &self.x
    }

    pub fn primary(&self) -> &[f64] {
        &self.d
    }

    pub fn secondary(&self) -> &[f64] {
        &self.s
    }

    pub fn is_straight(&self) -> bool {
        self.straight
    }

    /// `(P0, P1, P2)`.
    pub fn control_points(&self) -> [Vector; 3] {
        let p1 = self
            .x
            .iter()
            .zip(&self.d)
            .map(|(x, d)| x + 0.5 * d)
            .collect();
        let p2 = self.x.iter().zip(&self.s).map(|(x, s)| x + s).collect();
        [self.x.clone(), p1, p2]
    }

    pub fn eval(&self, t: f64) -> Result<Vector> {
        check_t(t)?;
        Ok(self.point(t))
    }

    /// Same point as [`eval`](Self::eval), computed from the Bernstein basis.
    pub fn eval_bernstein(&self, t: f64) -> Result<Vector> {
        check_t(t)?;
        let [p0, p1, p2] = self.control_points();
        let (b0, b1, b2) = ((1.0 - t) * (1.0 - t), 2.0 * t * (1.0 - t), t * t);
        Ok((0..p0.len())
            .map(|i| b0 * p0[i] + b1 * p1[i] + b2 * p2[i])
            .collect())
    }

    pub fn velocity(&self, t: f64) -> Result<Vector> {
        check_t(t)?;
        if self.straight {
            return Ok(self.d.clone());
        }
        Ok(self
            .d
            .iter()
            .zip(&self.s)
            .map(|(d, s)| d + 2.0 * t * (s - d))
            .collect())
    }

    /// Unchecked evaluation used inside the solvers, where `t` is a power of
    /// the backtracking factor.
    pub(crate) fn point(&self, t: f64) -> Vector {
        if self.straight {
            return self.x.iter().zip(&self.d).map(|(x, d)| x + t * d).collect();
        }
        let tt = t * t;
        self.x
            .iter()
            .zip(&self.d)
            .zip(&self.s)
            .map(|((x, d), s)| x + t * d + tt * (s - d))
            .collect()
    }
}

/// Weights expressing `γ(t)` as `a0·P0 + a1·P1 + a2·γ(t̂)` for `0 <= t <= t̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub t: f64,
    pub t_hat: f64,
}

impl HullCoefficients {
    /// Recombine three points with these weights.
    pub fn combine(&self, p0: &[f64], p1: &[f64], q: &[f64]) -> Vector {
        (0..p0.len())
            .map(|i| self.a0 * p0[i] + self.a1 * p1[i] + self.a2 * q[i])
            .collect()
    }
}

/// Convex-combination weights of `γ(t)` in terms of `P0`, `P1` and `γ(t̂)`.
///
/// They are non-negative and sum to one for any quadratic Bézier curve, so
/// a convex set containing `P0`, `P1` and `γ(t̂)` contains the whole arc
/// `γ([0, t̂])`.
pub fn hull_coefficients(t: f64, t_hat: f64) -> Result<HullCoefficients> {
    if !(t_hat > 0.0 && t_hat <= 1.0) {
        return Err(Error::Domain(format!(
            "t_hat must lie in (0, 1], got {t_hat}"
        )));
    }
    if !(t >= 0.0 && t <= t_hat) {
        return Err(Error::Domain(format!(
            "t must lie in [0, t_hat = {t_hat}], got {t}"
        )));
    }
    let ratio = t / t_hat;
    let a2 = ratio * ratio;
    let a0 = (1.0 - t) * (1.0 - t) - a2 * (1.0 - t_hat) * (1.0 - t_hat);
    let a1 = 2.0 * t * (1.0 - t) - 2.0 * (t * ratio) * (1.0 - t_hat);
    Ok(HullCoefficients {
        a0,
        a1,
        a2,
        t,
        t_hat,
    })
}

/// Whether constraint `i` is violated at `γ(t̂)`.
///
/// When `P0` and `P1` satisfy constraint `i`, a violation anywhere on the
/// curve forces a violation at `P2`; this helper exists to test that
/// implication.
pub fn infeasibility_propagates(
    curve: &QuadraticCurve,
    set: &dyn ConvexFeasibleSet,
    t_hat: f64,
    i: usize,
) -> Result<bool> {
    if i >= set.num_constraints() {
        return Err(Error::Contract(format!(
            "constraint index {i} out of range"
        )));
    }
    let [p0, p1, _] = curve.control_points();
    if set.eval_g_i(&p0, i) > FEAS_TOL || set.eval_g_i(&p1, i) > FEAS_TOL {
        return Err(Error::Contract(format!(
            "P0 and P1 must satisfy constraint {i} for the implication to apply"
        )));
    }
    Ok(set.eval_g_i(&curve.eval(t_hat)?, i) > 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveDecision {
    /// The quadratic curve is feasible for all small enough steps.
    CurveOk,
    /// Some nearly active constraint is violated at `x + s`; search along `d`.
    FallBack,
}

/// Decide between the curve and the straight line along `d`.
///
/// Collects the constraints with `g_i(x + t̃ d) >= -eps` and falls back iff
/// one of them is violated at `P2 = x + s`. Requires `x` and `x + d` to be
/// feasible.
pub fn feasibility_certificate(
    curve: &QuadraticCurve,
    set: &dyn ConvexFeasibleSet,
    t_tilde: f64,
    eps: f64,
) -> Result<CurveDecision> {
    if !(t_tilde > 0.0 && t_tilde < 1.0) {
        return Err(Error::Domain(format!(
            "t_tilde must lie in (0, 1), got {t_tilde}"
        )));
    }
    let x = curve.base();
    let d = curve.primary();
    let x_plus_d: Vector = x.iter().zip(d).map(|(a, b)| a + b).collect();
    if set.max_g(x) > FEAS_TOL {
        return Err(Error::Contract(
            "certificate needs a feasible base point".into(),
        ));
    }
    if set.max_g(&x_plus_d) > FEAS_TOL {
        return Err(Error::Contract(
            "certificate needs x + d to be feasible".into(),
        ));
    }
    let probe: Vector = x.iter().zip(d).map(|(a, b)| a + t_tilde * b).collect();
    let active = active_set(set, &probe, eps)?;
    if active.is_empty() {
        return Ok(CurveDecision::CurveOk);
    }
    let p2: Vector = x
        .iter()
        .zip(curve.secondary())
        .map(|(a, b)| a + b)
        .collect();
    let violated = active
        .indices
        .iter()
        .any(|&i| set.eval_g_i(&p2, i) > FEAS_TOL);
    Ok(if violated {
        CurveDecision::FallBack
    } else {
        CurveDecision::CurveOk
    })
}
