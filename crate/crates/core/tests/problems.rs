use curvesearch::problems::{check_gradient, list_problems};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect())
        .collect()
}

#[test]
fn analytic_gradients_match_central_differences() {
    for p in list_problems() {
        for x in random_points(p.dim(), 10, 2024) {
            let err = check_gradient(p.as_ref(), &x, 1e-6).unwrap();
            assert!(err <= 1e-5, "{}: {err:e}", p.name());
        }
    }
}

#[test]
fn coordinate_terms_carry_all_dependence_on_the_coordinate() {
    // Moving x_i changes f exactly as much as it changes the partial sum.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in list_problems() {
        let x = random_points(p.dim(), 1, 99).remove(0);
        for _ in 0..20 {
            let i = rng.gen_range(0..p.dim());
            let Some(t0) = p.coordinate_terms(&x, i) else {
                break;
            };
            let mut y = x.clone();
            y[i] += 0.3;
            let t1 = p.coordinate_terms(&y, i).unwrap();
            let df = p.eval_f(&y) - p.eval_f(&x);
            let scale = p.eval_f(&x).abs().max(1.0);
            assert!(
                ((t1 - t0) - df).abs() <= 1e-11 * scale,
                "{} coordinate {i}",
                p.name()
            );
        }
    }
}

#[test]
fn gradients_are_deterministic() {
    for p in list_problems() {
        let x = p.start();
        assert_eq!(p.eval_grad(&x), p.eval_grad(&x));
        assert_eq!(p.eval_f(&x).to_bits(), p.eval_f(&x).to_bits());
    }
}
