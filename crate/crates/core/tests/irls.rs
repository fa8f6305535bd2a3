use proptest::prelude::*;
use rootpow::irls::{irls_location, loss_objective, IrlsProblem};
use rootpow::Lambda;

fn problem(xs: &[f64], l: f64, c: f64) -> IrlsProblem {
    IrlsProblem::new(xs.to_vec(), Lambda::new(l).unwrap(), c).unwrap()
}

/// Minimizer of the objective: an exhaustive scan, golden section inside the
/// best cell, then bisection on the sign of a centered difference, which
/// keeps resolving where the objective itself is too flat to compare.
fn scan_then_golden(p: &IrlsProblem, lo: f64, hi: f64, step: f64) -> f64 {
    let n = ((hi - lo) / step).round() as usize;
    let (mut best, mut best_mu) = (f64::INFINITY, lo);
    for i in 0..=n {
        let mu = lo + step * i as f64;
        let v = loss_objective(mu, p);
        if v < best {
            best = v;
            best_mu = mu;
        }
    }
    let (mut a, mut b) = (best_mu - step, best_mu + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = b - ratio * (b - a);
        let m2 = a + ratio * (b - a);
        if loss_objective(m1, p) <= loss_objective(m2, p) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let mid = 0.5 * (a + b);
    let h = 1e-5;
    let slope = |mu: f64| loss_objective(mu + h, p) - loss_objective(mu - h, p);
    let (mut a, mut b) = (mid - step, mid + step);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if slope(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn outlier_is_ignored_by_the_gaussian_kernel() {
    let p = problem(&[0.0, 0.0, 10.0], f64::NEG_INFINITY, 1.0)
        .with_tol(1e-12)
        .unwrap();
    let r = irls_location(&p);
    let oracle = scan_then_golden(&p, -1.0, 11.0, 1e-6);
    assert!(r.converged);
    assert!((r.mu - oracle).abs() <= 1e-8, "{} vs {oracle}", r.mu);
    assert!(r.mu.abs() <= 1e-8);
    assert!(loss_objective(r.mu, &p) <= loss_objective(10.0 / 3.0, &p));
}

#[test]
fn charbonnier_location_matches_scan() {
    let xs = [0.3, 1.7, 2.2, 2.9, 3.1, 3.4, 9.0, -4.0, 2.5];
    let p = problem(&xs, -0.5, 1.0);
    let r = irls_location(&p);
    let oracle = scan_then_golden(&p, -4.0, 9.0, 1e-4);
    assert!(r.converged);
    assert!((r.mu - oracle).abs() <= 1e-7, "{} vs {oracle}", r.mu);
}

fn datasets() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-20.0f64..20.0, 1..=50)
}

fn robust_lambda() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        Just(-0.5),
        Just(-1.0),
        Just(-2.0),
        Just(f64::NEG_INFINITY),
        -8.0f64..0.0,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_never_increases(xs in datasets(), l in robust_lambda(), c in 0.2f64..5.0) {
        let p = problem(&xs, l, c);
        let mut prev = loss_objective(p.median(), &p);
        for step in p.iterates().take(200) {
            let cur = loss_objective(step.mu, &p);
            prop_assert!(cur <= prev + 1e-12 * (1.0 + prev.abs()), "{cur} > {prev}");
            prev = cur;
        }
    }

    #[test]
    fn converged_estimates_are_stationary(xs in datasets(), l in robust_lambda(), c in 0.2f64..5.0) {
        let p = problem(&xs, l, c).with_max_iters(100_000).unwrap();
        let r = irls_location(&p);
        prop_assume!(r.converged);
        let scale: f64 = 1.0 + xs.iter().map(|x| x.abs()).sum::<f64>();
        prop_assert!(r.grad_norm <= 1e-8 * scale, "grad {} scale {scale}", r.grad_norm);
    }
}
