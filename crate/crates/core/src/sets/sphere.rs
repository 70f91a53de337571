use super::ConvexFeasibleSet;
use crate::linalg::{dist, sub};
use crate::{Result, Vector};

/// Ball `‖x - c‖² - r² <= 0`.
#[derive(Debug, Clone)]
pub struct Sphere {
    center: Vector,
    radius: f64,
    name: String,
}

impl Sphere {
    /// The origin-centred ball of radius 10.
    pub fn new(n: usize) -> Self {
        Self::with_center(vec![0.0; n], 10.0, "sph")
    }

    pub fn with_center(center: Vector, radius: f64, name: &str) -> Self {
        assert!(radius > 0.0);
        Self {
            center,
            radius,
            name: name.to_string(),
        }
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub(crate) fn project_unchecked(&self, z: &[f64]) -> Vector {
        let r = dist(z, &self.center);
        if r <= self.radius {
            return z.to_vec();
        }
        z.iter()
            .zip(&self.center)
            .map(|(zi, ci)| ci + self.radius * (zi - ci) / r)
            .collect()
    }
}

impl ConvexFeasibleSet for Sphere {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn num_constraints(&self) -> usize {
        1
    }
    fn eval_g_i(&self, x: &[f64], i: usize) -> f64 {
        debug_assert_eq!(i, 0);
        let r = dist(x, &self.center);
        r * r - self.radius * self.radius
    }
    fn eval_g_grad(&self, x: &[f64], i: usize) -> Vector {
        debug_assert_eq!(i, 0);
        sub(x, &self.center).into_iter().map(|v| 2.0 * v).collect()
    }
    fn project(&self, z: &[f64]) -> Result<Vector> {
        Ok(self.project_unchecked(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_projection() {
        let s = Sphere::new(2);
        assert_eq!(s.project(&[20.0, 0.0]).unwrap(), vec![10.0, 0.0]);
        assert_eq!(s.project(&[3.0, 4.0]).unwrap(), vec![3.0, 4.0]);
        assert_eq!(s.project(&[6.0, 8.0]).unwrap(), vec![6.0, 8.0]);
        assert_eq!(s.eval_g_i(&[6.0, 8.0], 0), 0.0);
        let z = [-30.0, 40.0];
        let p = s.project(&z).unwrap();
        assert_eq!(p, vec![10.0 * -30.0 / 50.0, 10.0 * 40.0 / 50.0]);
    }

    #[test]
    fn gradient() {
        let s = Sphere::with_center(vec![1.0, 1.0], 2.0, "ball");
        assert_eq!(s.eval_g_grad(&[2.0, 0.0], 0), vec![2.0, -2.0]);
        assert_eq!(s.eval_g_i(&[3.0, 1.0], 0), 0.0);
    }
}
