//! Accuracy of the stable evaluator against the unguarded closed form.
//!
//! The reference values come from [`oracle_f_dd`], which evaluates the
//! generic case formula at the exact double value of `λ` in double-double
//! arithmetic. Errors are summarized per `λ` as the geometric mean of the
//! absolute error over a log-spaced grid of `x`.

pub mod dd;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::transform::{max_domain, transform_naive, Lambda, NumericPolicy, RootTransform};
use dd::Dd;

/// `f(x, λ)` in double-double precision.
///
/// Exact `λ ∈ {0, ±1, ±∞}` use their limit forms; every other `λ` (however
/// close to a singular value) goes through the generic formula, so the
/// result is the transform at that exact `λ`, not at the nearest special
/// case.
pub fn oracle_f_dd(x: f64, lambda: Lambda) -> Result<Dd> {
    if x.is_nan() {
        return Err(Error::NanInput);
    }
    let l = lambda.get();
    let x = Dd::from(x.min(max_domain(lambda)));
    Ok(if l.abs() < NumericPolicy::BINARY64.tiny {
        x
    } else if l == 1.0 {
        x.expm1()
    } else if l == -1.0 {
        x.log1p()
    } else if l == f64::INFINITY {
        -(-x).log1p()
    } else if l == f64::NEG_INFINITY {
        -(-x).expm1()
    } else if l > 0.0 {
        let one_minus = Dd::sum(1.0, -l);
        let inner = (one_minus / l * x).log1p() / one_minus;
        inner.expm1() * l
    } else {
        let one_plus = Dd::sum(1.0, l);
        let inner = (-x / l).log1p() * one_plus;
        inner.expm1() * (-l) / one_plus
    })
}

/// [`oracle_f_dd`] rounded to the nearest double.
pub fn oracle_f(x: f64, lambda: Lambda) -> Result<f64> {
    Ok(oracle_f_dd(x, lambda)?.to_f64())
}

/// One `λ` of an error sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AccuracyRow {
    pub lambda: Lambda,
    /// `None` where the closed form is undefined (`λ ∈ {0, ±∞}`).
    pub err_naive: Option<f64>,
    pub err_stable: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n: usize,
    /// Ordered by `λ`.
    pub rows: Vec<AccuracyRow>,
}

/// `n` log-spaced points from `lo` to `hi`, endpoints included exactly.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut xs: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    xs[0] = lo;
    xs[n - 1] = hi;
    xs
}

/// `exp(mean(ln eᵢ))`, with zero errors replaced by the smallest positive
/// normal and NaN treated as infinite.
pub fn geometric_mean(errors: &[f64]) -> f64 {
    let tiny = NumericPolicy::BINARY64.tiny;
    let sum: f64 = errors
        .iter()
        .map(|&e| if e.is_nan() { f64::INFINITY } else { e.max(tiny) }.ln())
        .sum();
    (sum / errors.len() as f64).exp()
}

fn abs_error(value: f64, reference: Dd) -> f64 {
    (reference - value).to_f64().abs()
}

/// Geometric-mean absolute errors of both evaluators for one `λ`.
pub fn sweep_row(lambda: Lambda, xs: &[f64]) -> AccuracyRow {
    let t = RootTransform::new(lambda);
    let dom = t.max_domain();
    let mut stable = Vec::with_capacity(xs.len());
    let mut naive = Vec::with_capacity(xs.len());
    let naive_defined = transform_naive(0.0, lambda).is_ok();
    for &x in xs {
        let x = x.min(dom);
        let reference = oracle_f_dd(x, lambda).expect("grid points are not NaN");
        stable.push(abs_error(t.eval(x), reference));
        if naive_defined {
            let v = transform_naive(x, lambda).expect("branch checked above");
            naive.push(abs_error(v, reference));
        }
    }
    AccuracyRow {
        lambda,
        err_naive: naive_defined.then(|| geometric_mean(&naive)),
        err_stable: geometric_mean(&stable),
    }
}

/// Sweeps every `λ` over `n` log-spaced `x` in `[x_lo, x_hi]`. Points above
/// a transform's domain are clamped to it, as in evaluation.
pub fn error_sweep(lambdas: &[Lambda], x_lo: f64, x_hi: f64, n: usize) -> Result<AccuracyReport> {
    if !(x_lo > 0.0 && x_lo < x_hi && x_hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "the x window must satisfy 0 < x_lo < x_hi < inf, got [{x_lo}, {x_hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "the sweep needs at least 2 points, got {n}"
        )));
    }
    let xs = log_grid(x_lo, x_hi, n);
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(|a, b| a.get().total_cmp(&b.get()));
    sorted.dedup_by(|a, b| a.get().to_bits() == b.get().to_bits());
    Ok(AccuracyReport {
        x_lo,
        x_hi,
        n,
        rows: sorted.into_iter().map(|l| sweep_row(l, &xs)).collect(),
    })
}

/// `{±1 ± 10ᵏ·eps}` and `{±10ᵏ}` for `k = 0..=6`, plus `[−3, 3]` in steps
/// of `0.05`. Sorted and free of duplicates.
pub fn default_sweep_lambdas() -> Vec<Lambda> {
    let eps = NumericPolicy::BINARY64.eps;
    let mut v = Vec::new();
    for k in 0..=6 {
        let d = 10f64.powi(k) * eps;
        let p = 10f64.powi(k);
        v.extend([1.0 + d, 1.0 - d, -1.0 + d, -1.0 - d, p, -p]);
    }
    v.extend((-60..=60).map(|i| i as f64 / 20.0));
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.into_iter()
        .map(|l| Lambda::new(l).expect("finite"))
        .collect()
}

/// Default `x` window and sample count.
pub const DEFAULT_X_LO: f64 = 0.01;
pub const DEFAULT_X_HI: f64 = 1.0;
pub const DEFAULT_N: usize = 1000;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn lam(v: f64) -> Lambda {
        Lambda::new(v).unwrap()
    }

    fn ulps(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    #[test]
    fn oracle_examples() {
        let stable = RootTransform::new(lam(0.25)).eval(0.5);
        assert!(ulps(oracle_f(0.5, lam(0.25)).unwrap(), stable) <= 2);
        assert_eq!(oracle_f(1.0, lam(-1.0)).unwrap(), LN_2);
        assert_eq!(oracle_f(0.0, lam(3.0)).unwrap(), 0.0);
        assert_eq!(oracle_f(4.0, lam(-0.5)).unwrap(), 2.0);
        assert_eq!(oracle_f(1.0, lam(2.0)).unwrap(), 2.0);
        assert!(oracle_f(f64::NAN, lam(2.0)).is_err());
    }

    #[test]
    fn oracle_limits_agree_with_nearby_lambda() {
        for (l, near) in [(1.0, 1.0 + 1e-12), (-1.0, -1.0 - 1e-12), (0.0, 1e-13)] {
            for x in [0.01, 0.3, 1.0] {
                let a = oracle_f(x, lam(l)).unwrap();
                let b = oracle_f(x, lam(near)).unwrap();
                assert!((a - b).abs() < 1e-10, "l={l} x={x}");
            }
        }
        let a = oracle_f(0.5, Lambda::INFINITY).unwrap();
        assert!((a - oracle_f(0.5, lam(1e12)).unwrap()).abs() < 1e-10);
        let a = oracle_f(0.5, Lambda::NEG_INFINITY).unwrap();
        assert!((a - oracle_f(0.5, lam(-1e12)).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn naive_loses_digits_near_one() {
        let l = lam(1.0 + 2f64.powi(-20));
        let err = (oracle_f(0.5, l).unwrap() - transform_naive(0.5, l).unwrap()).abs();
        let stable = (oracle_f(0.5, l).unwrap() - RootTransform::new(l).eval(0.5)).abs();
        assert!(err > 1e3 * stable.max(f64::EPSILON), "{err} vs {stable}");
    }

    #[test]
    fn geometric_mean_floors_zeros() {
        let tiny = f64::MIN_POSITIVE;
        assert!((geometric_mean(&[0.0, 0.0]) - tiny).abs() <= 1e-12 * tiny);
        assert!((geometric_mean(&[1e-4, 1e-2]) - 1e-3).abs() < 1e-18);
        assert_eq!(geometric_mean(&[1.0, f64::NAN]), f64::INFINITY);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.01, 1.0, 1000);
        assert_eq!(g.len(), 1000);
        assert_eq!((g[0], g[999]), (0.01, 1.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sweep_validation_and_order() {
        assert!(error_sweep(&[lam(1.0)], 0.0, 1.0, 10).is_err());
        assert!(error_sweep(&[lam(1.0)], 1.0, 0.5, 10).is_err());
        assert!(error_sweep(&[lam(1.0)], 0.01, 1.0, 1).is_err());
        let r = error_sweep(&[lam(2.0), Lambda::ZERO, lam(-0.5), lam(2.0)], 0.01, 1.0, 50).unwrap();
        let ls: Vec<f64> = r.rows.iter().map(|r| r.lambda.get()).collect();
        assert_eq!(ls, vec![-0.5, 0.0, 2.0]);
        assert_eq!(r.rows[1].err_naive, None);
        assert!(r.rows[0].err_stable <= 1e-15);
    }

    #[test]
    fn default_lambdas() {
        let v = default_sweep_lambdas();
        assert!(v.windows(2).all(|w| w[0].get() < w[1].get()));
        assert!(v.contains(&lam(1e6)) && v.contains(&lam(-1e6)));
        assert!(v.contains(&lam(1.0 + f64::EPSILON)) && v.contains(&lam(-3.0)));
    }
}
