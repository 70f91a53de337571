use curvesearch::linalg::{dist, dot, sub};
use curvesearch::sets::{
    make_box, make_composite, make_ellipsoid, make_sphere, set_by_name, CompositeSet, SET_NAMES,
};
use curvesearch::{ConvexFeasibleSet, FEAS_TOL};
use proptest::prelude::*;

fn sets(n: usize) -> Vec<Box<dyn ConvexFeasibleSet>> {
    SET_NAMES
        .iter()
        .map(|s| set_by_name(s, n, 17).unwrap())
        .collect()
}

fn point(n: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..=scale, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projections_are_feasible_and_idempotent(z in point(4, 40.0)) {
        for set in sets(4) {
            let p = set.project(&z).unwrap();
            prop_assert!(set.max_g(&p) <= FEAS_TOL, "{}: {:e}", set.name(), set.max_g(&p));
            let q = set.project(&p).unwrap();
            prop_assert!(dist(&p, &q) <= 1e-8, "{} moved a projected point", set.name());
        }
    }

    #[test]
    fn projections_are_nonexpansive(a in point(3, 30.0), b in point(3, 30.0)) {
        for set in sets(3) {
            let pa = set.project(&a).unwrap();
            let pb = set.project(&b).unwrap();
            prop_assert!(dist(&pa, &pb) <= dist(&a, &b) + 1e-8, "{}", set.name());
        }
    }

    /// `(z - Π z)ᵀ(y - Π z) <= 0` for feasible `y`, here `y` the projection of another point.
    #[test]
    fn variational_inequality(z in point(3, 30.0), w in point(3, 30.0)) {
        for set in sets(3) {
            let p = set.project(&z).unwrap();
            let y = set.project(&w).unwrap();
            let v = dot(&sub(&z, &p), &sub(&y, &p));
            prop_assert!(v <= 1e-7 * (1.0 + dot(&z, &z).sqrt()), "{}: {v:e}", set.name());
        }
    }

    /// Each set is convex: midpoints of feasible points are feasible.
    #[test]
    fn midpoints_stay_inside(a in point(3, 30.0), b in point(3, 30.0), lam in 0.0..=1.0f64) {
        for set in sets(3) {
            let pa = set.project(&a).unwrap();
            let pb = set.project(&b).unwrap();
            let m: Vec<f64> = pa.iter().zip(&pb).map(|(u, v)| lam * u + (1.0 - lam) * v).collect();
            prop_assert!(set.max_g(&m) <= FEAS_TOL, "{}", set.name());
        }
    }

    /// KKT oracle for the composite set: `z - p` is a non-negative
    /// combination of the gradients of the constraints active at `p`.
    #[test]
    fn composite_projection_satisfies_kkt(z in point(2, 40.0)) {
        let c = make_composite(2);
        let p = c.project(&z).unwrap();
        let r = sub(&z, &p);
        let active: Vec<usize> = (0..c.num_constraints()).filter(|&i| c.eval_g_i(&p, i) >= -1e-7).collect();
        prop_assert!(kkt_residual(&c, &p, &r, &active) <= 1e-6 * (1.0 + dot(&z, &z).sqrt()));
    }
}

/// Smallest `‖r - Σ λ_i ∇g_i(p)‖` over `λ >= 0`, brute force over subsets of
/// at most two active gradients (enough in the plane).
fn kkt_residual(c: &CompositeSet, p: &[f64], r: &[f64], active: &[usize]) -> f64 {
    let norm = |v: &[f64]| dot(v, v).sqrt();
    let mut best = norm(r);
    let grads: Vec<Vec<f64>> = active.iter().map(|&i| c.eval_g_grad(p, i)).collect();
    for g in &grads {
        let lam = (dot(r, g) / dot(g, g)).max(0.0);
        best = best.min(norm(
            &r.iter()
                .zip(g)
                .map(|(a, b)| a - lam * b)
                .collect::<Vec<_>>(),
        ));
    }
    for i in 0..grads.len() {
        for j in i + 1..grads.len() {
            let (a, b) = (&grads[i], &grads[j]);
            let det = a[0] * b[1] - a[1] * b[0];
            if det.abs() < 1e-14 {
                continue;
            }
            let la = (r[0] * b[1] - r[1] * b[0]) / det;
            let lb = (a[0] * r[1] - a[1] * r[0]) / det;
            if la >= -1e-12 && lb >= -1e-12 {
                best = 0.0;
            }
        }
    }
    best
}

#[test]
fn composite_constraint_layout() {
    let c = make_composite(3);
    assert_eq!(c.num_constraints(), 2 * 3 + 2);
    let x = [4.0, 4.0, 4.0];
    assert_eq!(c.eval_g_i(&x, 0), -100.0);
    assert!((c.eval_g_i(&x, 1) - (-1.0)).abs() < 1e-15);
    assert_eq!(c.eval_g_i(&x, 2), 4.0 - 10.0);
    assert_eq!(c.eval_g_i(&x, 2 + 3), -5.0 - 4.0);
}

#[test]
fn large_composite_projection_is_feasible() {
    let c = make_composite(1000);
    let z: Vec<f64> = (0..1000)
        .map(|i| ((i * 37 % 101) as f64 - 50.0) * 3.0)
        .collect();
    let p = c.project(&z).unwrap();
    assert!(c.max_g(&p) <= FEAS_TOL);
}

#[test]
fn registry_builds_every_set() {
    for name in SET_NAMES {
        let s = set_by_name(name, 5, 1).unwrap();
        assert_eq!(s.name(), name);
        assert_eq!(s.dim(), 5);
    }
    assert!(set_by_name("cube", 5, 1).is_err());
    assert!(make_box(3, 1.0, -1.0).is_err());
    assert!(make_ellipsoid(2, vec![0.0; 2], Some(vec![1.0, -1.0]), 0).is_err());
    assert_eq!(make_sphere(4).num_constraints(), 1);
}
