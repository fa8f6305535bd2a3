//! Box-Cox `h(x, λ)`, its normalized variant `ĥ(x, λ)`, and the bijection
//! between `h` and the root transform.
//!
//! Box-Cox uses the convention that `λ = 1` is the identity, whereas the root
//! transform is the identity at `λ = 0`.

use crate::error::{Error, Result};
use crate::transform::{Lambda, NumericPolicy, RootTransform};

/// Box-Cox exponent: finite and not NaN.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BoxCoxLambda(f64);

impl BoxCoxLambda {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(BoxCoxLambda(value))
        } else if value.is_nan() {
            Err(Error::NanLambda)
        } else {
            Err(Error::InvalidArgument(format!(
                "the Box-Cox exponent must be finite, got {value}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BoxCoxLambda {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        BoxCoxLambda::new(value)
    }
}

fn policy() -> NumericPolicy {
    NumericPolicy::BINARY64
}

fn is_zero(l: f64) -> bool {
    l.abs() < policy().tiny
}

fn is_one(l: f64) -> bool {
    (l - 1.0).abs() < policy().eps
}

/// `((1+x)^λ − 1)/λ`, or `ln(1+x)` at `λ = 0`. Requires `x > −1`.
pub fn box_cox(x: f64, lambda: BoxCoxLambda) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NanInput);
    }
    if !(x > -1.0) {
        return Err(Error::Domain {
            x,
            reason: "Box-Cox needs x > -1",
        });
    }
    let l = lambda.get();
    let log = x.ln_1p();
    if is_zero(l) {
        Ok(log)
    } else {
        Ok((l * log).exp_m1() / l)
    }
}

/// Box-Cox rescaled to unit slope and curvature `sign(λ − 1)` at the origin.
pub fn box_cox_normalized(x: f64, lambda: BoxCoxLambda) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NanInput);
    }
    let l = lambda.get();
    if is_one(l) {
        return Ok(x);
    }
    let (inner, outer) = if is_zero(l) {
        (x, 1.0)
    } else if l < 1.0 {
        (x / (1.0 - l), 1.0 / l - 1.0)
    } else {
        (x / (l - 1.0), (l - 1.0) / l)
    };
    if inner < -1.0 {
        return Err(Error::Domain {
            x,
            reason: "the base of the normalized Box-Cox power is negative",
        });
    }
    if is_zero(l) {
        return Ok(inner.ln_1p());
    }
    Ok(outer * (l * inner.ln_1p()).exp_m1())
}

/// `f(x, λ)` computed through Box-Cox:
///
/// ```text
/// λ < 0:  −λ · h(−x/λ, λ + 1)
/// λ = 0:  h(x, 1)
/// λ > 0:  λ/(1−λ) · h((1−λ)/λ · x, 1/(1−λ))
/// ```
///
/// The `λ > 0` row is singular at `λ = 1`, and no row covers `λ = ±∞`; both
/// are rejected.
pub fn transform_via_box_cox(x: f64, lambda: Lambda) -> Result<f64> {
    let l = lambda.get();
    if !lambda.is_finite() {
        return Err(Error::LambdaOutOfRange {
            lambda,
            reason: "the Box-Cox bijection has no row for infinite lambda",
        });
    }
    if is_one(l) {
        return Err(Error::UnsupportedBranch(lambda));
    }
    if is_zero(l) {
        box_cox(x, BoxCoxLambda(1.0))
    } else if l < 0.0 {
        Ok(-l * box_cox(-x / l, BoxCoxLambda::new(l + 1.0)?)?)
    } else {
        let k = 1.0 - l;
        Ok(l / k * box_cox(k / l * x, BoxCoxLambda::new(1.0 / k)?)?)
    }
}

/// `h(x, λ)` computed through the root transform:
///
/// ```text
/// λ < 1:  1/(1−λ) · f((1−λ)·x, λ − 1)
/// λ = 1:  f(x, 0)
/// λ > 1:  1/(λ−1) · f((λ−1)·x, 1 − 1/λ)
/// ```
pub fn box_cox_via_transform(x: f64, lambda: BoxCoxLambda) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NanInput);
    }
    let l = lambda.get();
    let f = |x: f64, lam: f64| RootTransform::new(Lambda::new(lam).expect("finite")).eval(x);
    Ok(if is_one(l) {
        f(x, 0.0)
    } else if l < 1.0 {
        f((1.0 - l) * x, l - 1.0) / (1.0 - l)
    } else {
        f((l - 1.0) * x, 1.0 - 1.0 / l) / (l - 1.0)
    })
}
