use super::SmoothProblem;
use crate::Vector;

type ObjectiveFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradientFn = dyn Fn(&[f64]) -> Vector + Send + Sync;

/// Problem assembled from closures. Handy for tests and one-off objectives.
pub struct FnProblem {
    name: String,
    dim: usize,
    start: Vector,
    f: Box<ObjectiveFn>,
    grad: Box<GradientFn>,
}

impl FnProblem {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        start: Vector,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[f64]) -> Vector + Send + Sync + 'static,
    ) -> Self {
        assert_eq!(start.len(), dim, "start point must match the dimension");
        Self {
            name: name.into(),
            dim,
            start,
            f: Box::new(f),
            grad: Box::new(grad),
        }
    }
}

impl SmoothProblem for FnProblem {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        (self.grad)(x)
    }
    fn start(&self) -> Vector {
        self.start.clone()
    }
}

/// Adjacent pairs `(x_k, x_{k+1})` that contain coordinate `i`.
fn windows_touching(x: &[f64], i: usize) -> impl Iterator<Item = &[f64]> {
    let first = i.saturating_sub(1);
    let last = i.min(x.len() - 2);
    (first..=last).map(move |k| &x[k..k + 2])
}

/// `100 (y - x^2)^2 + (1 - x)^2`, start `(-1.2, 1)`.
pub struct Rosenbrock;

impl SmoothProblem for Rosenbrock {
    fn name(&self) -> &str {
        "rosenbrock-2"
    }
    fn dim(&self) -> usize {
        2
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        let r = x[1] - x[0] * x[0];
        100.0 * r * r + (1.0 - x[0]) * (1.0 - x[0])
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let r = x[1] - x[0] * x[0];
        vec![-400.0 * x[0] * r - 2.0 * (1.0 - x[0]), 200.0 * r]
    }
    fn start(&self) -> Vector {
        vec![-1.2, 1.0]
    }
}

/// Beale's function, start `(1, 1)`.
pub struct Beale;

const BEALE_Y: [f64; 3] = [1.5, 2.25, 2.625];

impl SmoothProblem for Beale {
    fn name(&self) -> &str {
        "beale-2"
    }
    fn dim(&self) -> usize {
        2
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        let (a, b) = (x[0], x[1]);
        BEALE_Y
            .iter()
            .enumerate()
            .map(|(i, y)| {
                let r = y - a * (1.0 - b.powi(i as i32 + 1));
                r * r
            })
            .sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let (a, b) = (x[0], x[1]);
        let mut g = vec![0.0; 2];
        for (i, y) in BEALE_Y.iter().enumerate() {
            let p = i as i32 + 1;
            let r = y - a * (1.0 - b.powi(p));
            g[0] += -2.0 * r * (1.0 - b.powi(p));
            g[1] += 2.0 * r * a * p as f64 * b.powi(p - 1);
        }
        g
    }
    fn start(&self) -> Vector {
        vec![1.0, 1.0]
    }
}

/// Freudenstein–Roth, start `(0.5, -2)`.
pub struct FreudensteinRoth;

impl FreudensteinRoth {
    fn residuals(x: &[f64]) -> (f64, f64) {
        let (a, b) = (x[0], x[1]);
        (
            -13.0 + a + ((5.0 - b) * b - 2.0) * b,
            -29.0 + a + ((b + 1.0) * b - 14.0) * b,
        )
    }
}

impl SmoothProblem for FreudensteinRoth {
    fn name(&self) -> &str {
        "froth-2"
    }
    fn dim(&self) -> usize {
        2
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        let (r1, r2) = Self::residuals(x);
        r1 * r1 + r2 * r2
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let b = x[1];
        let (r1, r2) = Self::residuals(x);
        let d1 = 10.0 * b - 3.0 * b * b - 2.0;
        let d2 = 3.0 * b * b + 2.0 * b - 14.0;
        vec![2.0 * (r1 + r2), 2.0 * (r1 * d1 + r2 * d2)]
    }
    fn start(&self) -> Vector {
        vec![0.5, -2.0]
    }
}

/// Chained Wood function (CHAINWOO), `n` even and at least 4.
///
/// Start: `(-3, -1, -3, -1, -2, -2, ...)`. The minimum value is 1 at the
/// all-ones point.
pub struct ChainedWood {
    n: usize,
    name: String,
}

impl ChainedWood {
    pub fn new(n: usize) -> Self {
        assert!(
            n >= 4 && n.is_multiple_of(2),
            "chained Wood needs an even n >= 4"
        );
        Self {
            n,
            name: format!("chainwoo-{n}"),
        }
    }

    /// Wood block on coordinates `j..j+4`.
    fn block(x: &[f64], j: usize) -> f64 {
        let (a, b, c, e) = (x[j], x[j + 1], x[j + 2], x[j + 3]);
        100.0 * (b - a * a).powi(2)
            + (1.0 - a).powi(2)
            + 90.0 * (e - c * c).powi(2)
            + (1.0 - c).powi(2)
            + 10.0 * (b + e - 2.0).powi(2)
            + 0.1 * (b - e).powi(2)
    }
}

impl SmoothProblem for ChainedWood {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        1.0 + (0..self.n - 2)
            .step_by(2)
            .map(|j| Self::block(x, j))
            .sum::<f64>()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let mut g = vec![0.0; self.n];
        for j in (0..self.n - 2).step_by(2) {
            let (a, b, c, e) = (x[j], x[j + 1], x[j + 2], x[j + 3]);
            let r1 = b - a * a;
            let r3 = e - c * c;
            let r5 = b + e - 2.0;
            let r6 = b - e;
            g[j] += -400.0 * a * r1 - 2.0 * (1.0 - a);
            g[j + 1] += 200.0 * r1 + 20.0 * r5 + 0.2 * r6;
            g[j + 2] += -360.0 * c * r3 - 2.0 * (1.0 - c);
            g[j + 3] += 180.0 * r3 + 20.0 * r5 - 0.2 * r6;
        }
        g
    }
    fn coordinate_terms(&self, x: &[f64], i: usize) -> Option<f64> {
        let first = i.saturating_sub(3).div_ceil(2) * 2;
        Some(
            (first..=i.min(self.n - 4))
                .step_by(2)
                .map(|j| Self::block(x, j))
                .sum(),
        )
    }
    fn start(&self) -> Vector {
        let mut x = vec![-2.0; self.n];
        x[..4].copy_from_slice(&[-3.0, -1.0, -3.0, -1.0]);
        x
    }
}

/// Strictly convex `sum_i i * x_i^2` (TESTQUAD style), start all ones.
pub struct DiagonalQuadratic {
    n: usize,
    name: String,
}

impl DiagonalQuadratic {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            n,
            name: format!("testquad-{n}"),
        }
    }

    /// Weight of coordinate `i` (0-based).
    pub fn weight(i: usize) -> f64 {
        (i + 1) as f64
    }
}

impl SmoothProblem for DiagonalQuadratic {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(i, v)| Self::weight(i) * v * v)
            .sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        x.iter()
            .enumerate()
            .map(|(i, v)| 2.0 * Self::weight(i) * v)
            .collect()
    }
    fn coordinate_terms(&self, x: &[f64], i: usize) -> Option<f64> {
        Some(Self::weight(i) * x[i] * x[i])
    }
    fn start(&self) -> Vector {
        vec![1.0; self.n]
    }
}

/// Tridiagonal quadratic (TRIDIA): `(x_1 - 1)^2 + sum_{i>=2} i (2 x_i - x_{i-1})^2`,
/// start all ones.
pub struct Tridia {
    n: usize,
    name: String,
}

impl Tridia {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        Self {
            n,
            name: format!("tridia-{n}"),
        }
    }

    fn term(x: &[f64], k: usize) -> f64 {
        if k == 0 {
            (x[0] - 1.0).powi(2)
        } else {
            let r = 2.0 * x[k] - x[k - 1];
            (k + 1) as f64 * r * r
        }
    }
}

impl SmoothProblem for Tridia {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        (0..self.n).map(|k| Self::term(x, k)).sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let mut g = vec![0.0; self.n];
        g[0] = 2.0 * (x[0] - 1.0);
        for i in 1..self.n {
            let w = (i + 1) as f64;
            let r = 2.0 * x[i] - x[i - 1];
            g[i] += 4.0 * w * r;
            g[i - 1] -= 2.0 * w * r;
        }
        g
    }
    fn coordinate_terms(&self, x: &[f64], i: usize) -> Option<f64> {
        Some(
            (i..=(i + 1).min(self.n - 1))
                .map(|k| Self::term(x, k))
                .sum(),
        )
    }
    fn start(&self) -> Vector {
        vec![1.0; self.n]
    }
}

/// Extended Powell singular quartic, `n` a multiple of 4, start `(3, -1, 0, 1)` tiled.
pub struct ExtendedPowell {
    n: usize,
    name: String,
}

impl ExtendedPowell {
    pub fn new(n: usize) -> Self {
        assert!(
            n >= 4 && n.is_multiple_of(4),
            "extended Powell needs n divisible by 4"
        );
        Self {
            n,
            name: format!("ext-powell-{n}"),
        }
    }

    fn block(q: &[f64]) -> f64 {
        let (a, b, c, e) = (q[0], q[1], q[2], q[3]);
        (a + 10.0 * b).powi(2)
            + 5.0 * (c - e).powi(2)
            + (b - 2.0 * c).powi(4)
            + 10.0 * (a - e).powi(4)
    }
}

impl SmoothProblem for ExtendedPowell {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        x.chunks_exact(4).map(Self::block).sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let mut g = Vec::with_capacity(self.n);
        for q in x.chunks_exact(4) {
            let (a, b, c, e) = (q[0], q[1], q[2], q[3]);
            let u = a + 10.0 * b;
            let v = c - e;
            let w = (b - 2.0 * c).powi(3);
            let z = (a - e).powi(3);
            g.extend_from_slice(&[
                2.0 * u + 40.0 * z,
                20.0 * u + 4.0 * w,
                10.0 * v - 8.0 * w,
                -10.0 * v - 40.0 * z,
            ]);
        }
        g
    }
    fn coordinate_terms(&self, x: &[f64], i: usize) -> Option<f64> {
        let j = i / 4 * 4;
        Some(Self::block(&x[j..j + 4]))
    }
    fn start(&self) -> Vector {
        [3.0, -1.0, 0.0, 1.0]
            .iter()
            .copied()
            .cycle()
            .take(self.n)
            .collect()
    }
}

/// Trigonometric least squares:
/// `sum_i (n - sum_j cos x_j + i (1 - cos x_i) - sin x_i)^2`, start `1/n`.
pub struct TrigSum {
    n: usize,
    name: String,
}

impl TrigSum {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            n,
            name: format!("trig-{n}"),
        }
    }

    fn residuals(&self, x: &[f64]) -> Vector {
        let cos_sum: f64 = x.iter().map(|v| v.cos()).sum();
        x.iter()
            .enumerate()
            .map(|(i, v)| self.n as f64 - cos_sum + (i + 1) as f64 * (1.0 - v.cos()) - v.sin())
            .collect()
    }
}

impl SmoothProblem for TrigSum {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        self.residuals(x).iter().map(|r| r * r).sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let r = self.residuals(x);
        let total: f64 = r.iter().sum();
        x.iter()
            .enumerate()
            .map(|(j, v)| {
                let (s, c) = v.sin_cos();
                2.0 * s * total + 2.0 * r[j] * ((j + 1) as f64 * s - c)
            })
            .collect()
    }
    fn start(&self) -> Vector {
        vec![1.0 / self.n as f64; self.n]
    }
}

/// Linear least squares with a full-rank matrix (ARGLINA), `m = 2n` rows,
/// start all ones. Minimum value `m - n`.
pub struct ArgLinA {
    n: usize,
    name: String,
}

impl ArgLinA {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            n,
            name: format!("arglina-{n}"),
        }
    }

    fn rows(&self) -> f64 {
        (2 * self.n) as f64
    }
}

impl SmoothProblem for ArgLinA {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        let m = self.rows();
        let shift = 2.0 * x.iter().sum::<f64>() / m;
        let tail = -shift - 1.0;
        x.iter().map(|v| (v - shift - 1.0).powi(2)).sum::<f64>() + (m - self.n as f64) * tail * tail
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let m = self.rows();
        let shift = 2.0 * x.iter().sum::<f64>() / m;
        let tail = -shift - 1.0;
        let r_sum: f64 =
            x.iter().map(|v| v - shift - 1.0).sum::<f64>() + (m - self.n as f64) * tail;
        x.iter()
            .map(|v| 2.0 * (v - shift - 1.0) - 4.0 / m * r_sum)
            .collect()
    }
    fn start(&self) -> Vector {
        vec![1.0; self.n]
    }
}

/// Generalised humps, start `(-506.2, 506.2, 506.2, ...)`.
pub struct GenHumps {
    n: usize,
    name: String,
}

impl GenHumps {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        Self {
            n,
            name: format!("genhumps-{n}"),
        }
    }

    fn term(w: &[f64]) -> f64 {
        let (a, b) = ((2.0 * w[0]).sin(), (2.0 * w[1]).sin());
        a * a * b * b + 0.05 * (w[0] * w[0] + w[1] * w[1])
    }
}

impl SmoothProblem for GenHumps {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        x.windows(2).map(Self::term).sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let mut g = vec![0.0; self.n];
        for i in 0..self.n - 1 {
            let (sa, ca) = (2.0 * x[i]).sin_cos();
            let (sb, cb) = (2.0 * x[i + 1]).sin_cos();
            g[i] += 4.0 * sa * ca * sb * sb + 0.1 * x[i];
            g[i + 1] += 4.0 * sb * cb * sa * sa + 0.1 * x[i + 1];
        }
        g
    }
    fn coordinate_terms(&self, x: &[f64], i: usize) -> Option<f64> {
        Some(windows_touching(x, i).map(Self::term).sum())
    }
    fn start(&self) -> Vector {
        let mut x = vec![506.2; self.n];
        x[0] = -506.2;
        x
    }
}

/// Engvall's chained quartic (ENGVAL1), start all twos.
pub struct EngVal1 {
    n: usize,
    name: String,
}

impl EngVal1 {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        Self {
            n,
            name: format!("engval1-{n}"),
        }
    }

    fn term(w: &[f64]) -> f64 {
        let q = w[0] * w[0] + w[1] * w[1];
        q * q - 4.0 * w[0] + 3.0
    }
}

impl SmoothProblem for EngVal1 {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        x.windows(2).map(Self::term).sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let mut g = vec![0.0; self.n];
        for i in 0..self.n - 1 {
            let q = x[i] * x[i] + x[i + 1] * x[i + 1];
            g[i] += 4.0 * q * x[i] - 4.0;
            g[i + 1] += 4.0 * q * x[i + 1];
        }
        g
    }
    fn coordinate_terms(&self, x: &[f64], i: usize) -> Option<f64> {
        Some(windows_touching(x, i).map(Self::term).sum())
    }
    fn start(&self) -> Vector {
        vec![2.0; self.n]
    }
}

/// Fletcher's chained Rosenbrock variant (FLETCHCR), start all zeros.
pub struct FletcherCr {
    n: usize,
    name: String,
}

impl FletcherCr {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        Self {
            n,
            name: format!("fletchcr-{n}"),
        }
    }

    fn term(w: &[f64]) -> f64 {
        let r = w[1] - w[0] + 1.0 - w[0] * w[0];
        100.0 * r * r
    }
}

impl SmoothProblem for FletcherCr {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        x.windows(2).map(Self::term).sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        let mut g = vec![0.0; self.n];
        for i in 0..self.n - 1 {
            let r = x[i + 1] - x[i] + 1.0 - x[i] * x[i];
            g[i + 1] += 200.0 * r;
            g[i] += 200.0 * r * (-1.0 - 2.0 * x[i]);
        }
        g
    }
    fn coordinate_terms(&self, x: &[f64], i: usize) -> Option<f64> {
        Some(windows_touching(x, i).map(Self::term).sum())
    }
    fn start(&self) -> Vector {
        vec![0.0; self.n]
    }
}

/// Extended (block-separable) Rosenbrock, `n` even, start `(-1.2, 1)` tiled.
pub struct ExtendedRosenbrock {
    n: usize,
    name: String,
}

impl ExtendedRosenbrock {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2 && n.is_multiple_of(2));
        Self {
            n,
            name: format!("ext-rosenbrock-{n}"),
        }
    }
}

impl SmoothProblem for ExtendedRosenbrock {
    fn name(&self) -> &str {
        &self.name
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_f(&self, x: &[f64]) -> f64 {
        x.chunks_exact(2).map(|p| Rosenbrock.eval_f(p)).sum()
    }
    fn eval_grad(&self, x: &[f64]) -> Vector {
        x.chunks_exact(2)
            .flat_map(|p| Rosenbrock.eval_grad(p))
            .collect()
    }
    fn coordinate_terms(&self, x: &[f64], i: usize) -> Option<f64> {
        let j = i / 2 * 2;
        Some(Rosenbrock.eval_f(&x[j..j + 2]))
    }
    fn start(&self) -> Vector {
        [-1.2, 1.0].iter().copied().cycle().take(self.n).collect()
    }
}
