//! Compactly supported bumps `b(x, λ) = exp(−f(λ/(λ−1)·x², λ))` for
//! `1 < λ < ∞`, all supported on `[−1, 1]`.
//!
//! `λ → 1⁺` approaches a Dirac delta and `λ → ∞` an Epanechnikov profile.

use crate::error::{Error, Result};
use crate::transform::{Lambda, RootTransform};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpParams {
    transform: RootTransform,
    scale: f64,
}

impl BumpParams {
    pub fn new(lambda: Lambda) -> Result<Self> {
        let l = lambda.get();
        if !(l > 1.0 && l < f64::INFINITY) {
            return Err(Error::LambdaOutOfRange {
                lambda,
                reason: "bumps need 1 < lambda < inf",
            });
        }
        Ok(BumpParams {
            transform: RootTransform::new(lambda),
            scale: l / (l - 1.0),
        })
    }

    pub fn lambda(&self) -> Lambda {
        self.transform.lambda()
    }
}

/// `b(x, λ)`: `1` at the origin, exactly `0` for `|x| ≥ 1`, even.
pub fn bump(x: f64, params: &BumpParams) -> f64 {
    if !(x.abs() < 1.0) {
        return 0.0;
    }
    (-params.transform.eval(params.scale * x * x)).exp()
}

/// `exp(−1/(1−x²))` on `|x| < 1`, zero elsewhere.
pub fn bump_classic(x: f64) -> f64 {
    if !(x.abs() < 1.0) {
        return 0.0;
    }
    (-1.0 / (1.0 - x * x)).exp()
}
