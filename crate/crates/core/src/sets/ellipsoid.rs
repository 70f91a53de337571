use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{projection_failure, ConvexFeasibleSet};
use crate::{Error, Result, Vector, FEAS_TOL};

pub(crate) const ELLIPSOID_LEVEL: f64 = 25.0;
const ROOT_TOL: f64 = 1e-10;
const MAX_ROOT_ITERS: usize = 200;

/// Axis-aligned ellipsoid `Σ (x_i - c_i)² / p_i - level <= 0`.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    center: Vector,
    p_diag: Vector,
    level: f64,
}

impl Ellipsoid {
    pub fn new(center: Vector, p_diag: Vector, level: f64) -> Result<Self> {
        if center.len() != p_diag.len() {
            return Err(Error::Domain(
                "ellipsoid center and diagonal differ in length".into(),
            ));
        }
        if p_diag.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(Error::Domain(
                "ellipsoid diagonal must be positive and finite".into(),
            ));
        }
        if !(level > 0.0) {
            return Err(Error::Domain(format!(
                "ellipsoid level must be positive, got {level}"
            )));
        }
        Ok(Self {
            center,
            p_diag,
            level,
        })
    }

    /// Diagonal drawn uniformly from `[0.5, 2.0]`.
    pub fn random(n: usize, center: Vector, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = (0..n).map(|_| rng.gen_range(0.5..=2.0)).collect();
        Self::new(center, p, ELLIPSOID_LEVEL)
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn p_diag(&self) -> &[f64] {
        &self.p_diag
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    fn g(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.center)
            .zip(&self.p_diag)
            .map(|((xi, ci), pi)| (xi - ci) * (xi - ci) / pi)
            .sum::<f64>()
            - self.level
    }

    /// `g(x(λ))` and its derivative, where `x_i(λ) - c_i = p_i u_i / (p_i + 2λ)`.
    fn secular(&self, u: &[f64], lambda: f64) -> (f64, f64) {
        let mut phi = -self.level;
        let mut dphi = 0.0;
        for (ui, pi) in u.iter().zip(&self.p_diag) {
            let q = pi + 2.0 * lambda;
            let w = pi * ui * ui / (q * q);
            phi += w;
            dphi -= 4.0 * w / q;
        }
        (phi, dphi)
    }
}

impl ConvexFeasibleSet for Ellipsoid {
    fn name(&self) -> &str {
        "ell"
    }
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn num_constraints(&self) -> usize {
        1
    }
    fn eval_g_i(&self, x: &[f64], i: usize) -> f64 {
        debug_assert_eq!(i, 0);
        self.g(x)
    }
    fn eval_g_grad(&self, x: &[f64], i: usize) -> Vector {
        debug_assert_eq!(i, 0);
        x.iter()
            .zip(&self.center)
            .zip(&self.p_diag)
            .map(|((xi, ci), pi)| 2.0 * (xi - ci) / pi)
            .collect()
    }

    /// Solves the KKT system `x - z + λ ∇g(x) = 0` for the multiplier with
    /// Newton steps safeguarded by a bisection bracket.
    fn project(&self, z: &[f64]) -> Result<Vector> {
        if self.g(z) <= 0.0 {
            return Ok(z.to_vec());
        }
        let u: Vector = z.iter().zip(&self.center).map(|(zi, ci)| zi - ci).collect();
        let weighted: f64 = u
            .iter()
            .zip(&self.p_diag)
            .map(|(ui, pi)| pi * ui * ui)
            .sum();
        // g(x(λ)) + level <= Σ p u² / (2λ)², so this λ is on the feasible side.
        let mut hi = 0.5 * (weighted / self.level).sqrt();
        let mut lo = 0.0;
        let mut lambda = 0.0;
        let mut converged = false;
        for _ in 0..MAX_ROOT_ITERS {
            let (phi, dphi) = self.secular(&u, lambda);
            if phi.abs() <= ROOT_TOL {
                converged = true;
                break;
            }
            if phi > 0.0 {
                lo = lambda;
            } else {
                hi = lambda;
            }
            let newton = lambda - phi / dphi;
            lambda = if newton > lo && newton < hi && newton.is_finite() {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        if !converged {
            return Err(projection_failure(
                "ell",
                format!("multiplier search did not converge in {MAX_ROOT_ITERS} iterations"),
            ));
        }
        let x: Vector = u
            .iter()
            .zip(&self.center)
            .zip(&self.p_diag)
            .map(|((ui, ci), pi)| ci + pi * ui / (pi + 2.0 * lambda))
            .collect();
        let viol = self.g(&x);
        if viol > FEAS_TOL {
            return Err(projection_failure(
                "ell",
                format!("projected point violates g by {viol:e}"),
            ));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> Ellipsoid {
        Ellipsoid::new(vec![1.0; n], vec![1.0; n], 25.0).unwrap()
    }

    #[test]
    fn center_is_fixed() {
        assert_eq!(unit(2).project(&[1.0, 1.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn round_case_is_radial() {
        let p = unit(2).project(&[11.0, 1.0]).unwrap();
        assert!(
            (p[0] - 6.0).abs() < 1e-9 && (p[1] - 1.0).abs() < 1e-12,
            "{p:?}"
        );
    }

    #[test]
    fn axis_aligned_stretch() {
        let e = Ellipsoid::new(vec![1.0, 1.0], vec![4.0, 1.0], 25.0).unwrap();
        let p = e.project(&[100.0, 1.0]).unwrap();
        assert!(
            (p[0] - 11.0).abs() < 1e-9 && (p[1] - 1.0).abs() < 1e-12,
            "{p:?}"
        );
    }

    #[test]
    fn axis_aligned_matches_grid_search() {
        // Brute force over a fine grid of the boundary parameterised by angle.
        let e = Ellipsoid::new(vec![1.0, 1.0], vec![4.0, 1.0], 25.0).unwrap();
        let z = [100.0, 1.0];
        let (a, b) = ((25.0f64 * 4.0).sqrt(), 5.0);
        let mut best = (f64::INFINITY, [0.0, 0.0]);
        for k in 0..200_000 {
            let th = k as f64 / 200_000.0 * std::f64::consts::TAU;
            let y = [1.0 + a * th.cos(), 1.0 + b * th.sin()];
            let d = (y[0] - z[0]).powi(2) + (y[1] - z[1]).powi(2);
            if d < best.0 {
                best = (d, y);
            }
        }
        let p = e.project(&z).unwrap();
        assert!((p[0] - best.1[0]).abs() < 1e-6 && (p[1] - best.1[1]).abs() < 1e-3);
    }

    #[test]
    fn random_diagonal_in_range_and_reproducible() {
        let a = Ellipsoid::random(50, vec![1.0; 50], 3).unwrap();
        let b = Ellipsoid::random(50, vec![1.0; 50], 3).unwrap();
        assert_eq!(a.p_diag(), b.p_diag());
        assert!(a.p_diag().iter().all(|p| (0.5..=2.0).contains(p)));
    }

    #[test]
    fn rejects_nonpositive_diagonal() {
        assert!(Ellipsoid::new(vec![0.0], vec![0.0], 25.0).is_err());
    }

    #[test]
    fn far_points_land_on_boundary() {
        let e = Ellipsoid::random(200, vec![1.0; 200], 11).unwrap();
        let z: Vec<f64> = (0..200).map(|i| 1e4 * ((i as f64) * 1.3).sin()).collect();
        let p = e.project(&z).unwrap();
        assert!(e.g(&p).abs() <= 1e-10);
    }
}
