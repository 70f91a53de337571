use super::box_set::BoxSet;
use super::sphere::Sphere;
use super::{projection_failure, ConvexFeasibleSet};
use crate::linalg::{dist, dot, norm_sq};
use crate::{Error, Result, Vector, FEAS_TOL};

const DYKSTRA_TOL: f64 = 1e-10;
const DYKSTRA_MAX_SWEEPS: usize = 10_000;

/// Halfspace `wᵀx - b <= 0`.
#[derive(Debug, Clone)]
pub struct Halfspace {
    pub w: Vector,
    pub b: f64,
}

impl Halfspace {
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.w, x) - self.b
    }

    pub fn project(&self, z: &[f64]) -> Vector {
        let excess = self.eval(z);
        if excess <= 0.0 {
            return z.to_vec();
        }
        let step = excess / norm_sq(&self.w);
        z.iter()
            .zip(&self.w)
            .map(|(zi, wi)| zi - step * wi)
            .collect()
    }
}

/// A projection onto one piece of an intersection.
pub type Projector<'a> = &'a dyn Fn(&[f64]) -> Vector;

/// Dykstra's alternating projections onto the intersection of the sets whose
/// individual projections are `projs`.
///
/// Stops once a full sweep moves the iterate by at most `tol` and `accept`
/// holds for the current iterate. Returns the point and the sweep count.
pub fn dykstra(
    projs: &[Projector<'_>],
    z: &[f64],
    tol: f64,
    max_sweeps: usize,
    accept: impl Fn(&[f64]) -> bool,
) -> Option<(Vector, usize)> {
    let mut x = z.to_vec();
    let mut incr = vec![vec![0.0; z.len()]; projs.len()];
    let mut shifted = vec![0.0; z.len()];
    for sweep in 1..=max_sweeps {
        let start = x.clone();
        for (proj, inc) in projs.iter().zip(incr.iter_mut()) {
            for ((s, xi), ii) in shifted.iter_mut().zip(&x).zip(inc.iter()) {
                *s = xi + ii;
            }
            let y = proj(&shifted);
            for ((ii, s), yi) in inc.iter_mut().zip(&shifted).zip(&y) {
                *ii = s - yi;
            }
            x = y;
        }
        if dist(&x, &start) <= tol && accept(&x) {
            return Some((x, sweep));
        }
    }
    None
}

/// Intersection of a shifted ball, a halfspace and a box:
/// `‖x - 4·1‖² <= 100`, `(1/n)·1ᵀx <= 5`, `-5 <= x_i <= 10`.
///
/// Constraint 0 is the ball, 1 the halfspace, then the `2n` box bounds.
#[derive(Debug, Clone)]
pub struct CompositeSet {
    ball: Sphere,
    plane: Halfspace,
    bounds: BoxSet,
}

impl CompositeSet {
    pub fn new(n: usize) -> Self {
        Self::from_parts(
            Sphere::with_center(vec![4.0; n], 10.0, "com-ball"),
            Halfspace {
                w: vec![1.0 / n as f64; n],
                b: 5.0,
            },
            BoxSet::named(n, -5.0, 10.0, "com-box").expect("static bounds"),
        )
    }

    pub fn from_parts(ball: Sphere, plane: Halfspace, bounds: BoxSet) -> Self {
        Self {
            ball,
            plane,
            bounds,
        }
    }

    pub fn ball(&self) -> &Sphere {
        &self.ball
    }

    pub fn plane(&self) -> &Halfspace {
        &self.plane
    }

    pub fn bounds(&self) -> &BoxSet {
        &self.bounds
    }
}

impl ConvexFeasibleSet for CompositeSet {
    fn name(&self) -> &str {
        "com"
    }
    fn dim(&self) -> usize {
        self.bounds.dim()
    }
    fn num_constraints(&self) -> usize {
        2 + self.bounds.num_constraints()
    }
    fn eval_g_i(&self, x: &[f64], i: usize) -> f64 {
        match i {
            0 => self.ball.eval_g_i(x, 0),
            1 => self.plane.eval(x),
            _ => self.bounds.eval_g_i(x, i - 2),
        }
    }
    fn eval_g_grad(&self, x: &[f64], i: usize) -> Vector {
        match i {
            0 => self.ball.eval_g_grad(x, 0),
            1 => self.plane.w.clone(),
            _ => self.bounds.eval_g_grad(x, i - 2),
        }
    }
    fn max_g(&self, x: &[f64]) -> f64 {
        self.ball
            .eval_g_i(x, 0)
            .max(self.plane.eval(x))
            .max(self.bounds.max_violation(x))
    }

    fn project(&self, z: &[f64]) -> Result<Vector> {
        if z.len() != self.dim() {
            return Err(Error::Domain(
                "point dimension does not match the set".into(),
            ));
        }
        if self.max_g(z) <= 0.0 {
            return Ok(z.to_vec());
        }
        // If projecting onto one of the pieces already lands in the
        // intersection, that point is the projection onto the intersection.
        let singles = [
            self.ball.project_unchecked(z),
            self.plane.project(z),
            self.bounds.clamp(z),
        ];
        if let Some(best) = singles
            .into_iter()
            .filter(|p| self.max_g(p) <= FEAS_TOL)
            .min_by(|a, b| dist(a, z).total_cmp(&dist(b, z)))
        {
            return Ok(best);
        }
        if let Some(p) = self
            .dual_projection(z)
            .filter(|p| self.max_g(p) <= FEAS_TOL)
        {
            return Ok(p);
        }
        let ball = |v: &[f64]| self.ball.project_unchecked(v);
        let plane = |v: &[f64]| self.plane.project(v);
        let clamp = |v: &[f64]| self.bounds.clamp(v);
        dykstra(
            &[&ball, &plane, &clamp],
            z,
            DYKSTRA_TOL,
            DYKSTRA_MAX_SWEEPS,
            |x| self.max_g(x) <= FEAS_TOL,
        )
        .map(|(x, _)| x)
        .ok_or_else(|| {
            projection_failure(
                "com",
                format!("Dykstra did not settle within {DYKSTRA_MAX_SWEEPS} sweeps"),
            )
        })
    }
}

impl CompositeSet {
    /// Minimiser over the box of the Lagrangian with ball multiplier `lam`
    /// and halfspace multiplier `mu`.
    fn lagrangian_point(&self, z: &[f64], lam: f64, mu: f64) -> Vector {
        let (lo, hi) = self.bounds.bounds();
        let c = self.ball.center();
        z.iter()
            .zip(c)
            .zip(&self.plane.w)
            .map(|((zi, ci), wi)| {
                ((zi + 2.0 * lam * ci - mu * wi) / (1.0 + 2.0 * lam)).clamp(lo, hi)
            })
            .collect()
    }

    fn best_plane_multiplier(&self, z: &[f64], lam: f64) -> Option<Vector> {
        let at = |mu| self.lagrangian_point(z, lam, mu);
        largest_feasible_root(|mu| self.plane.eval(&at(mu))).map(at)
    }

    /// Exact projection from the KKT conditions. The box stays explicit, so
    /// only the ball and halfspace multipliers are searched. Both dual
    /// derivatives are monotone, hence nested bisection.
    fn dual_projection(&self, z: &[f64]) -> Option<Vector> {
        let r2 = self.ball.radius() * self.ball.radius();
        let ball_g = |lam: f64| {
            self.best_plane_multiplier(z, lam)
                .map_or(f64::NAN, |x| dist(&x, self.ball.center()).powi(2) - r2)
        };
        let lam = largest_feasible_root(ball_g)?;
        self.best_plane_multiplier(z, lam)
    }
}

/// Smallest `t >= 0` (up to rounding) with `h(t) <= 0`, for nonincreasing `h`.
/// Returns the upper end of the final bracket, where `h <= 0` holds.
fn largest_feasible_root(h: impl Fn(f64) -> f64) -> Option<f64> {
    if h(0.0) <= 0.0 {
        return Some(0.0);
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while !(h(hi) <= 0.0) {
        hi *= 2.0;
        doublings += 1;
        if doublings > 1100 {
            return None;
        }
    }
    let mut lo = if doublings == 0 { 0.0 } else { hi / 2.0 };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-16 * hi {
            break;
        }
        if h(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
