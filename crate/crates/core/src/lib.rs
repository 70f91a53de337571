//! Projected-gradient methods with heavy-ball curve search for smooth
//! problems `min f(x) s.t. g(x) <= 0` over convex sets with a tractable
//! Euclidean projection.
//!
//! The crate is organised bottom-up:
//!
//! * [`problems`]: smooth test objectives with analytic gradients.
//! * [`sets`]: the sphere, ellipsoid, composite and box feasible sets.
//! * [`curves`]: quadratic Bézier search curves and their feasibility
//!   certificate.
//! * [`solvers`]: the curve-search solver (SCS) and the spectral projected
//!   gradient baseline (SPG).
//! * [`bench`]: benchmark plans, CSV records and performance profiles.

// `!(a < b)` is used deliberately so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod curves;
mod error;
pub mod linalg;
pub mod problems;
pub mod sets;
pub mod solvers;

pub use curves::{CurveDecision, HullCoefficients, QuadraticCurve};
pub use error::{Error, FailedCondition, Result};
pub use problems::SmoothProblem;
pub use sets::{ActiveSetQuery, ConvexFeasibleSet};
pub use solvers::{RunRecord, RunStatus, SolverConfig, SolverKind};

/// Dense coordinate vector used for points and directions.
pub type Vector = Vec<f64>;

/// Slack used for every runtime `g_i(x) <= 0` test.
pub const FEAS_TOL: f64 = 1e-8;
