use super::ConvexFeasibleSet;
use crate::{Error, Result, Vector};

/// Box `lo <= x_i <= hi`; constraint `i < n` is `x_i - hi`, constraint
/// `n + i` is `lo - x_i`.
#[derive(Debug, Clone)]
pub struct BoxSet {
    n: usize,
    lo: f64,
    hi: f64,
    name: String,
}

impl BoxSet {
    pub fn new(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::named(n, lo, hi, "box")
    }

    pub fn named(n: usize, lo: f64, hi: f64, name: &str) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Domain(format!(
                "box needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            n,
            lo,
            hi,
            name: name.to_string(),
        })
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub(crate) fn clamp(&self, z: &[f64]) -> Vector {
        z.iter().map(|v| self.hi.min(self.lo.max(*v))).collect()
    }

    pub(crate) fn max_violation(&self, x: &[f64]) -> f64 {
        x.iter().fold(f64::NEG_INFINITY, |m, v| {
            m.max(v - self.hi).max(self.lo - v)
        })
    }
}

impl ConvexFeasibleSet for BoxSet {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn num_constraints(&self) -> usize {
        2 * self.n
    }
    fn eval_g_i(&self, x: &[f64], i: usize) -> f64 {
        if i < self.n {
            x[i] - self.hi
        } else {
            self.lo - x[i - self.n]
        }
    }
    fn eval_g_grad(&self, _x: &[f64], i: usize) -> Vector {
        let mut g = vec![0.0; self.n];
        if i < self.n {
            g[i] = 1.0;
        } else {
            g[i - self.n] = -1.0;
        }
        g
    }
    fn project(&self, z: &[f64]) -> Result<Vector> {
        Ok(self.clamp(z))
    }
    fn max_g(&self, x: &[f64]) -> f64 {
        self.max_violation(x)
    }
}
