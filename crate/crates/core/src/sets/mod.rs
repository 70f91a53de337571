//! Convex feasible sets `{x : g_i(x) <= 0, i = 0..m}` with Euclidean projection.
//!
//! Four configurations ship with the crate:
//!
//! | name  | constraints                                                        | projection        |
//! |-------|--------------------------------------------------------------------|-------------------|
//! | `sph` | `‖x‖² - 100 <= 0`                                                  | radial, closed form |
//! | `ell` | `(x-c)ᵀP⁻¹(x-c) - 25 <= 0`, `c = 1`, `P` random diagonal           | multiplier root find |
//! | `com` | `‖x-4·1‖² - 100 <= 0`, `(1/n)·1ᵀx - 5 <= 0`, `-5 <= x_i <= 10`      | KKT dual, Dykstra fallback |
//! | `box` | `-1 <= x_i <= 1`                                                   | clamp             |
//!
//! Box bounds are exposed as `2n` separate affine constraints: index `i` is
//! the upper bound of coordinate `i` and index `n + i` its lower bound.

mod box_set;
mod composite;
mod ellipsoid;
mod sphere;

pub use box_set::BoxSet;
pub use composite::{dykstra, CompositeSet, Halfspace};
pub use ellipsoid::Ellipsoid;
pub use sphere::Sphere;

use crate::{Error, Result, Vector, FEAS_TOL};

/// Common interface of the shipped feasible sets.
///
/// Every `g_i` is convex and continuously differentiable. Implementations are
/// immutable and may be shared between threads.
pub trait ConvexFeasibleSet: Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn num_constraints(&self) -> usize;

    /// Value of constraint `i` at `x`.
    fn eval_g_i(&self, x: &[f64], i: usize) -> f64;

    /// Gradient of constraint `i` at `x`.
    fn eval_g_grad(&self, x: &[f64], i: usize) -> Vector;

    /// Euclidean projection onto the set.
    fn project(&self, z: &[f64]) -> Result<Vector>;

    fn eval_g(&self, x: &[f64]) -> Vector {
        (0..self.num_constraints())
            .map(|i| self.eval_g_i(x, i))
            .collect()
    }

    /// `max_i g_i(x)`.
    fn max_g(&self, x: &[f64]) -> f64 {
        (0..self.num_constraints())
            .map(|i| self.eval_g_i(x, i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Membership up to [`FEAS_TOL`].
    fn contains(&self, x: &[f64]) -> bool {
        self.max_g(x) <= FEAS_TOL
    }
}

/// Constraints within `tolerance` of being tight at `point`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSetQuery {
    pub point: Vector,
    pub tolerance: f64,
    pub indices: Vec<usize>,
}

impl ActiveSetQuery {
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Indices `i` with `g_i(x) >= -eps`.
pub fn active_set(set: &dyn ConvexFeasibleSet, x: &[f64], eps: f64) -> Result<ActiveSetQuery> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!(
            "active-set tolerance must be >= 0, got {eps}"
        )));
    }
    let indices = (0..set.num_constraints())
        .filter(|&i| set.eval_g_i(x, i) >= -eps)
        .collect();
    Ok(ActiveSetQuery {
        point: x.to_vec(),
        tolerance: eps,
        indices,
    })
}

pub const SET_NAMES: [&str; 4] = ["sph", "ell", "com", "box"];

pub fn make_sphere(n: usize) -> Sphere {
    Sphere::new(n)
}

pub fn make_box(n: usize, lo: f64, hi: f64) -> Result<BoxSet> {
    BoxSet::new(n, lo, hi)
}

/// Ellipsoid `(x-c)ᵀP⁻¹(x-c) <= 25`. Without `p_diag` the diagonal of `P`
/// is drawn uniformly from `[0.5, 2.0]` using `seed`.
pub fn make_ellipsoid(
    n: usize,
    center: Vector,
    p_diag: Option<Vector>,
    seed: u64,
) -> Result<Ellipsoid> {
    match p_diag {
        Some(p) => Ellipsoid::new(center, p, ellipsoid::ELLIPSOID_LEVEL),
        None => Ellipsoid::random(n, center, seed),
    }
}

pub fn make_composite(n: usize) -> CompositeSet {
    CompositeSet::new(n)
}

/// Stable seed for the ellipsoid paired with one problem instance.
pub fn ellipsoid_seed(base: u64, problem: &str, n: usize) -> u64 {
    // FNV-1a over the name, then mix in the base seed and dimension.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in problem.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ base.rotate_left(17) ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Build a registry set for an `n`-dimensional problem.
pub fn set_by_name(name: &str, n: usize, ell_seed: u64) -> Result<Box<dyn ConvexFeasibleSet>> {
    Ok(match name {
        "sph" => Box::new(make_sphere(n)),
        "ell" => Box::new(make_ellipsoid(n, vec![1.0; n], None, ell_seed)?),
        "com" => Box::new(make_composite(n)),
        "box" => Box::new(make_box(n, -1.0, 1.0)?),
        other => return Err(Error::UnknownSet(other.to_string())),
    })
}

pub(crate) fn projection_failure(set: &str, reason: impl Into<String>) -> Error {
    Error::ProjectionFailure {
        set: set.to_string(),
        reason: reason.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry() {
        for name in SET_NAMES {
            let s = set_by_name(name, 3, 7).unwrap();
            assert_eq!(s.name(), name);
            assert_eq!(s.dim(), 3);
        }
        assert!(matches!(
            set_by_name("cone", 3, 0),
            Err(Error::UnknownSet(_))
        ));
    }

    #[test]
    fn active_set_examples() {
        let sph = make_sphere(2);
        assert_eq!(
            active_set(&sph, &[10.0, 0.0], 0.0).unwrap().indices,
            vec![0]
        );
        assert!(active_set(&sph, &[0.0, 0.0], 0.1).unwrap().is_empty());

        let b = make_box(2, -1.0, 1.0).unwrap();
        let q = active_set(&b, &[0.999, 0.0], 0.01).unwrap();
        assert_eq!(q.indices, vec![0]);
        assert_eq!(q.tolerance, 0.01);

        assert!(matches!(
            active_set(&b, &[0.0, 0.0], -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn active_set_matches_definition() {
        let c = make_composite(3);
        let x = [4.0, 10.0, -5.0];
        let eps = 0.5;
        let q = active_set(&c, &x, eps).unwrap();
        let expect: Vec<usize> = c
            .eval_g(&x)
            .iter()
            .enumerate()
            .filter(|(_, g)| **g >= -eps)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(q.indices, expect);
    }

    #[test]
    fn ellipsoid_seed_depends_on_instance() {
        assert_eq!(ellipsoid_seed(1, "a", 2), ellipsoid_seed(1, "a", 2));
        assert_ne!(ellipsoid_seed(1, "a", 2), ellipsoid_seed(1, "b", 2));
        assert_ne!(ellipsoid_seed(1, "a", 2), ellipsoid_seed(2, "a", 2));
    }
}
