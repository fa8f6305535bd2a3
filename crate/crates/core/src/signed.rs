//! The signed extension `f±(x, λ₊, λ₋)` and activations built from it.
//!
//! Positive inputs go through `f(·, λ₊)`, negative ones through
//! `−f(−x, λ₋)`. Both halves have slope 1 at the origin, so every parameter
//! pair is continuous and once differentiable there.

use std::f64::consts::LN_2;

use crate::transform::{Lambda, RootTransform};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedParams {
    pos: RootTransform,
    neg: RootTransform,
}

impl SignedParams {
    pub fn new(lambda_pos: Lambda, lambda_neg: Lambda) -> Self {
        SignedParams {
            pos: RootTransform::new(lambda_pos),
            neg: RootTransform::new(lambda_neg),
        }
    }

    /// `λ₋ = λ₊`, giving `sign(x)·f(|x|, λ)`.
    pub fn symmetric(lambda: Lambda) -> Self {
        Self::new(lambda, lambda)
    }

    pub fn lambda_pos(&self) -> Lambda {
        self.pos.lambda()
    }

    pub fn lambda_neg(&self) -> Lambda {
        self.neg.lambda()
    }

    /// Parameters whose transform undoes this one.
    pub fn inverse(&self) -> Self {
        SignedParams {
            pos: self.pos.inverse(),
            neg: self.neg.inverse(),
        }
    }
}

/// `f±(x, λ₊, λ₋)`.
#[inline]
pub fn signed_transform(x: f64, params: &SignedParams) -> f64 {
    if x >= 0.0 {
        params.pos.eval(x)
    } else {
        -params.neg.eval(-x)
    }
}

fn fpm(x: f64, lambda_pos: Lambda, lambda_neg: Lambda) -> f64 {
    signed_transform(x, &SignedParams::new(lambda_pos, lambda_neg))
}

fn lam(v: f64) -> Lambda {
    Lambda::new(v).expect("finite constant")
}

/// `ln(1 + eˣ)` as `f±(f±(x, 1, −∞) + 1, −1, 0)`.
///
/// The outer argument is always positive, so its `λ₋` never matters.
pub fn softplus(x: f64) -> f64 {
    let inner = fpm(x, Lambda::ONE, Lambda::NEG_INFINITY);
    fpm(inner + 1.0, Lambda::NEG_ONE, Lambda::ZERO)
}

/// `1/(1 + e⁻ˣ)` as `½·f±(f±(x + ln 2, 1, −∞) + 1, −2, 0)`.
pub fn sigmoid(x: f64) -> f64 {
    let inner = fpm(x + LN_2, Lambda::ONE, Lambda::NEG_INFINITY);
    0.5 * fpm(inner + 1.0, lam(-2.0), Lambda::ZERO)
}

/// `tanh(x)` as `½·f±(f±(2x, 1, −∞), −2, 2)`.
pub fn tanh(x: f64) -> f64 {
    let inner = fpm(2.0 * x, Lambda::ONE, Lambda::NEG_INFINITY);
    0.5 * fpm(inner, lam(-2.0), lam(2.0))
}

/// `max(0, x)` as `2 − f±(f±(2 − x, 2, λ₋), −2, −λ₋)`.
///
/// For `x ≤ 0` the inner call is clamped to just below its domain bound and
/// the result is within a few ulps of zero rather than exactly zero. For
/// `x > 2` the inner value is `f(x − 2, λ₋)`, so the identity only holds
/// while `x − 2` stays inside the domain of `f(·, λ₋)`; with `λ₋ ≤ 1` that
/// is every `x`.
pub fn relu(x: f64, lambda_neg: Lambda) -> f64 {
    let inner = fpm(2.0 - x, lam(2.0), lambda_neg);
    2.0 - fpm(inner, lam(-2.0), -lambda_neg)
}

/// `x` for `x ≥ 0`, `eˣ − 1` otherwise. Equals `f±(x, 0, −∞)`.
pub fn elu_reference(x: f64) -> f64 {
    if x >= 0.0 {
        x
    } else {
        x.exp_m1()
    }
}
