use crate::curves::CurveDecision;
use crate::Vector;

/// Snapshot of one completed iteration, borrowed from the solver's state.
///
/// For SPG iterations `s == d`, `certificate` is `None` and `t` is the
/// accepted interpolation step.
#[derive(Debug, Clone, Copy)]
pub struct IterationEvent<'a> {
    pub k: usize,
    pub x: &'a [f64],
    pub x_prev: &'a [f64],
    pub x_next: &'a [f64],
    pub d: &'a [f64],
    /// Heavy-ball direction `α d + β η (x - x_prev)` before any fallback or
    /// momentum reduction.
    pub s_candidate: &'a [f64],
    /// Second direction actually used for the curve.
    pub s: &'a [f64],
    pub f: f64,
    pub f_ref: f64,
    pub f_next: f64,
    pub grad_dot_d: f64,
    pub t: f64,
    pub backtracks: usize,
    pub eta: f64,
    pub eps: f64,
    /// Momentum weight in effect when `s_candidate` was built.
    pub beta: f64,
    /// Reduced momentum weight, when the adaptive step ran.
    pub beta_k: Option<f64>,
    pub momentum_reductions: usize,
    /// `s` was replaced by `d`.
    pub fallback: bool,
    /// Certificate outcome; `None` on the first iteration and for SPG.
    pub certificate: Option<CurveDecision>,
    pub projection_required: bool,
    /// Length of the objective window the reference value was taken over.
    pub window: usize,
}

/// Owned copy of the scalar part of an [`IterationEvent`] plus the new iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub k: usize,
    pub x_next: Vector,
    pub f: f64,
    pub f_ref: f64,
    pub f_next: f64,
    pub grad_dot_d: f64,
    pub t: f64,
    pub eta: f64,
    pub beta_k: Option<f64>,
    pub fallback: bool,
}

impl From<&IterationEvent<'_>> for TraceEntry {
    fn from(e: &IterationEvent<'_>) -> Self {
        Self {
            k: e.k,
            x_next: e.x_next.to_vec(),
            f: e.f,
            f_ref: e.f_ref,
            f_next: e.f_next,
            grad_dot_d: e.grad_dot_d,
            t: e.t,
            eta: e.eta,
            beta_k: e.beta_k,
            fallback: e.fallback,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    /// Observer closure that appends every iteration to this trace.
    pub fn recorder(&mut self) -> impl FnMut(&IterationEvent<'_>) + '_ {
        move |e| self.entries.push(TraceEntry::from(e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
