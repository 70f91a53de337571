use curvesearch::curves::{feasibility_certificate, hull_coefficients, infeasibility_propagates};
use curvesearch::sets::{active_set, make_box, Sphere};
use curvesearch::{ConvexFeasibleSet, CurveDecision, QuadraticCurve, FEAS_TOL};
use proptest::prelude::*;

fn vec_of(n: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..=scale, n)
}

fn curve(max_n: usize) -> impl Strategy<Value = QuadraticCurve> {
    (1..=max_n).prop_flat_map(|n| {
        (vec_of(n, 10.0), vec_of(n, 10.0), vec_of(n, 10.0))
            .prop_map(|(x, d, s)| QuadraticCurve::new(x, d, s).unwrap())
    })
}

proptest! {
    #[test]
    fn bernstein_form_matches_power_form(c in curve(6), t in 0.0..=1.0f64) {
        let a = c.eval(t).unwrap();
        let b = c.eval_bernstein(t).unwrap();
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u - v).abs() <= 1e-12 * (1.0 + u.abs()));
        }
    }

    #[test]
    fn curve_interpolates_its_end_points(c in curve(6)) {
        let [p0, _, p2] = c.control_points();
        prop_assert_eq!(c.eval(0.0).unwrap(), p0);
        let end = c.eval(1.0).unwrap();
        for (u, v) in end.iter().zip(&p2) {
            prop_assert!((u - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
        prop_assert_eq!(c.velocity(0.0).unwrap(), c.primary().to_vec());
    }

    #[test]
    fn hull_weights_form_a_convex_combination(
        c in curve(5),
        t_hat in 1e-9..=1.0f64,
        frac in 0.0..=1.0f64,
    ) {
        let t = frac * t_hat;
        let h = hull_coefficients(t, t_hat).unwrap();
        prop_assert!((h.a0 + h.a1 + h.a2 - 1.0).abs() <= 1e-12);
        prop_assert!(h.a0 >= -1e-12 && h.a1 >= -1e-12 && h.a2 >= -1e-12);
        let [p0, p1, _] = c.control_points();
        let rebuilt = h.combine(&p0, &p1, &c.eval(t_hat).unwrap());
        for (u, v) in rebuilt.iter().zip(c.eval(t).unwrap()) {
            prop_assert!((u - v).abs() <= 1e-10);
        }
    }

    /// With `P0` and `P1` inside a ball, any violation along the curve shows
    /// up at `γ(t̂)` as well.
    #[test]
    fn violation_implies_violation_at_the_end(
        x in vec_of(3, 2.0),
        half_d in vec_of(3, 2.0),
        s in vec_of(3, 20.0),
        t_hat in 0.05..=1.0f64,
    ) {
        let ball = Sphere::with_center(vec![0.0; 3], 4.0, "ball");
        let d: Vec<f64> = half_d.iter().map(|v| 2.0 * v).collect();
        let c = QuadraticCurve::new(x, d, s).unwrap();
        let [p0, p1, _] = c.control_points();
        prop_assume!(ball.contains(&p0) && ball.contains(&p1));
        let end_bad = infeasibility_propagates(&c, &ball, t_hat, 0).unwrap();
        let some_bad = (1..=50).any(|k| ball.eval_g_i(&c.eval(t_hat * k as f64 / 50.0).unwrap(), 0) > FEAS_TOL);
        prop_assert!(!some_bad || end_bad);
    }

    /// A `CurveOk` decision means `x + s` satisfies every nearly active
    /// constraint, and a `FallBack` names one it violates.
    #[test]
    fn certificate_agrees_with_active_set(
        x in vec_of(2, 1.0),
        d in vec_of(2, 1.0),
        s in vec_of(2, 3.0),
        eps in 0.0..0.5f64,
    ) {
        let b = make_box(2, -1.0, 1.0).unwrap();
        let xd: Vec<f64> = x.iter().zip(&d).map(|(a, c)| a + c).collect();
        prop_assume!(b.contains(&xd));
        let c = QuadraticCurve::new(x.clone(), d.clone(), s.clone()).unwrap();
        let decision = feasibility_certificate(&c, &b, 0.5, eps).unwrap();
        let probe: Vec<f64> = x.iter().zip(&d).map(|(a, c)| a + 0.5 * c).collect();
        let active = active_set(&b, &probe, eps).unwrap();
        let p2: Vec<f64> = x.iter().zip(&s).map(|(a, c)| a + c).collect();
        let violated = active.indices.iter().any(|&i| b.eval_g_i(&p2, i) > FEAS_TOL);
        prop_assert_eq!(decision == CurveDecision::FallBack, violated);
    }

    /// Without any nearly active constraint, `CurveOk` curves start out feasible.
    #[test]
    fn certified_curves_have_a_feasible_prefix(
        x in vec_of(2, 0.5),
        d in vec_of(2, 0.4),
        s in vec_of(2, 0.4),
    ) {
        let b = make_box(2, -1.0, 1.0).unwrap();
        let c = QuadraticCurve::new(x, d, s).unwrap();
        let decision = feasibility_certificate(&c, &b, 0.5, 0.05).unwrap();
        prop_assert_eq!(decision, CurveDecision::CurveOk);
        for k in 0..=20 {
            prop_assert!(b.contains(&c.eval(k as f64 / 20.0).unwrap()));
        }
    }
}

#[test]
fn certificate_rejects_infeasible_inputs() {
    let b = make_box(1, -1.0, 1.0).unwrap();
    let outside = QuadraticCurve::new(vec![2.0], vec![-0.5], vec![-0.5]).unwrap();
    assert!(feasibility_certificate(&outside, &b, 0.5, 0.1).is_err());
    let overshoot = QuadraticCurve::new(vec![0.0], vec![3.0], vec![0.0]).unwrap();
    assert!(feasibility_certificate(&overshoot, &b, 0.5, 0.1).is_err());
    let ok = QuadraticCurve::new(vec![0.0], vec![0.5], vec![0.5]).unwrap();
    assert!(feasibility_certificate(&ok, &b, 1.0, 0.1).is_err());
}
