//! The root power transform `f(x, λ)`.
//!
//! Every case of the transform (including the removable singularities at
//! `λ ∈ {0, ±1, ±∞}`) has the shape
//!
//! ```text
//! post · expm1?( mid · log1p?( pre · x ) )
//! ```
//!
//! where either transcendental call may be skipped. [`BranchPlan`] captures
//! the three scale factors and two skip flags for a given `λ`, so a single
//! code path evaluates every branch.

mod lambda;

pub use lambda::Lambda;

use crate::error::{Error, Result};

/// Working-precision constants and the branch windows derived from them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericPolicy {
    /// Machine epsilon of the working format.
    pub eps: f64,
    /// Smallest positive normal of the working format.
    pub tiny: f64,
}

impl NumericPolicy {
    pub const BINARY64: NumericPolicy = NumericPolicy {
        eps: f64::EPSILON,
        tiny: f64::MIN_POSITIVE,
    };

    /// `λ` above this is treated as `+∞` (and below its negation as `−∞`).
    #[inline]
    pub fn pinf_threshold(&self) -> f64 {
        1.0 / self.eps
    }

    pub fn classify(&self, lambda: Lambda) -> BranchClass {
        let l = lambda.get();
        let big = self.pinf_threshold();
        if l > big {
            BranchClass::PositiveInfinity
        } else if (l - 1.0).abs() < self.eps {
            BranchClass::PositiveOne
        } else if l.abs() < self.tiny {
            BranchClass::Zero
        } else if (l + 1.0).abs() < self.eps {
            BranchClass::NegativeOne
        } else if l < -big {
            BranchClass::NegativeInfinity
        } else if l > 0.0 {
            BranchClass::Positive
        } else {
            BranchClass::Negative
        }
    }

    /// Replaces a near-zero denominator by `tiny`, keeping exact zeros positive.
    #[inline]
    fn nonzero(&self, d: f64) -> f64 {
        if d.abs() < self.tiny {
            self.tiny
        } else {
            d
        }
    }
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::BINARY64
    }
}

/// Which case of the transform a `λ` selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchClass {
    PositiveInfinity,
    PositiveOne,
    Positive,
    Zero,
    Negative,
    NegativeOne,
    NegativeInfinity,
}

/// Scale factors and skip flags of `post · expm1?(mid · log1p?(pre · x))`.
///
/// Each scale also keeps the rounding error of its own computation, so
/// [`BranchPlan::apply`] can evaluate the composition as if the scales were
/// exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPlan {
    pub pre_scale: f64,
    pub log_skip: bool,
    pub mid_scale: f64,
    pub exp_skip: bool,
    pub post_scale: f64,
    pre_lo: f64,
    mid_lo: f64,
    post_lo: f64,
}

/// `a + b` as an unevaluated sum `(s, e)` with `s = fl(a + b)`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// A first-order correction to `v`, dropped when it is not small next to
/// `v`. At the clamp edge the exact argument can sit past the log1p pole,
/// where the correction is meaningless.
fn small_correction(lo: f64, v: f64) -> f64 {
    if lo.abs() <= 1e-8 * v.abs().max(1.0) {
        lo
    } else {
        0.0
    }
}

impl BranchPlan {
    pub fn new(lambda: Lambda, policy: &NumericPolicy) -> Self {
        let l = lambda.get();
        let nz = |d| policy.nonzero(d);
        let (pre_scale, log_skip, mid_scale, exp_skip, post_scale) = match policy.classify(lambda)
        {
            BranchClass::PositiveInfinity => (-1.0, false, 1.0, true, -1.0),
            BranchClass::PositiveOne => (1.0, true, 1.0, false, 1.0),
            BranchClass::Positive => ((1.0 - l) / nz(l), false, 1.0 / nz(1.0 - l), false, l),
            BranchClass::Zero => (1.0, true, 1.0, true, 1.0),
            BranchClass::Negative => (-1.0 / nz(l), false, l + 1.0, false, -l / nz(l + 1.0)),
            BranchClass::NegativeOne => (1.0, false, 1.0, true, 1.0),
            BranchClass::NegativeInfinity => (-1.0, true, 1.0, false, -1.0),
        };
        let (pre_lo, mid_lo, post_lo) = match policy.classify(lambda) {
            BranchClass::Positive => {
                let (a, a_lo) = two_sum(1.0, -l);
                let a_nz = nz(a);
                let pre_lo = ((-pre_scale).mul_add(l, a) + a_lo) / l;
                let mid_lo = ((-mid_scale).mul_add(a_nz, 1.0) - mid_scale * a_lo) / a_nz;
                (pre_lo, mid_lo, 0.0)
            }
            BranchClass::Negative => {
                let (b, b_lo) = two_sum(l, 1.0);
                let b_nz = nz(b);
                let pre_lo = -pre_scale.mul_add(l, 1.0) / l;
                let post_lo = ((-post_scale).mul_add(b_nz, -l) - post_scale * b_lo) / b_nz;
                (pre_lo, b_lo, post_lo)
            }
            _ => (0.0, 0.0, 0.0),
        };
        BranchPlan {
            pre_scale,
            log_skip,
            mid_scale,
            exp_skip,
            post_scale,
            pre_lo: finite_or_zero(pre_lo),
            mid_lo: finite_or_zero(mid_lo),
            post_lo: finite_or_zero(post_lo),
        }
    }

    /// `pre · x`, passed through `log1p` unless skipped.
    #[inline]
    fn inner(&self, x: f64) -> f64 {
        self.inner_split(x).0
    }

    /// [`BranchPlan::inner`] as a value and a first-order correction.
    #[inline]
    fn inner_split(&self, x: f64) -> (f64, f64) {
        let y = self.pre_scale * x;
        if self.log_skip {
            return (y, 0.0);
        }
        // A negative pre-scale walks toward the log1p pole; rounding in the
        // clamp can land exactly on it.
        if self.pre_scale < 0.0 && y < NEXT_UP_NEG_ONE {
            return (NEXT_UP_NEG_ONE.ln_1p(), 0.0);
        }
        let l = y.ln_1p();
        let y_lo = self.pre_scale.mul_add(x, -y) + self.pre_lo * x;
        if !y.is_finite() || !y_lo.is_finite() {
            return (l, 0.0);
        }
        let l_lo = if l.abs() > 1.0 {
            // One Newton step on exp(l) = 1 + y. The rounding of `l` itself
            // grows with |l|; the residual's error does not.
            let r = l.exp();
            let (s, e) = two_sum(1.0, y);
            ((s - r) + (e + y_lo)) / r
        } else {
            y_lo / (1.0 + y)
        };
        (l, small_correction(l_lo, l))
    }

    /// Evaluates the plan at `x`, carrying the rounding errors of the scales,
    /// their products and `log1p` into `expm1` to first order.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        let (l, l_lo) = self.inner_split(x);
        let z = self.mid_scale * l;
        let z_lo = self.mid_scale.mul_add(l, -z) + self.mid_scale * l_lo + self.mid_lo * l;
        let z_lo = small_correction(z_lo, z);
        let r = if self.exp_skip {
            z + z_lo
        } else {
            let r = z.exp_m1();
            if r.is_finite() {
                r + z_lo * (1.0 + r)
            } else {
                r
            }
        };
        let out = if r.is_finite() {
            self.post_scale.mul_add(r, self.post_lo * r)
        } else {
            self.post_scale * r
        };
        // `+ 0.0` turns a signed zero into +0.
        out + 0.0
    }
}

const NEXT_UP_NEG_ONE: f64 = -1.0 + f64::EPSILON / 2.0;

/// Upper end of the non-negative domain of `f(·, λ)`, as the largest double
/// strictly below the bound `λ/(λ−1)` (`1` at `λ = +∞`, unbounded for `λ ≤ 1`).
pub fn max_domain(lambda: Lambda) -> f64 {
    let l = lambda.get();
    if l <= 1.0 {
        f64::INFINITY
    } else if l == f64::INFINITY {
        1.0f64.next_down()
    } else {
        (l / (l - 1.0)).next_down()
    }
}

/// `f(·, λ)` with its branch plan resolved once.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootTransform {
    lambda: Lambda,
    class: BranchClass,
    plan: BranchPlan,
    max_domain: f64,
}

impl RootTransform {
    pub fn new(lambda: Lambda) -> Self {
        Self::with_policy(lambda, &NumericPolicy::BINARY64)
    }

    pub fn with_policy(lambda: Lambda, policy: &NumericPolicy) -> Self {
        RootTransform {
            lambda,
            class: policy.classify(lambda),
            plan: BranchPlan::new(lambda, policy),
            max_domain: max_domain(lambda),
        }
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn class(&self) -> BranchClass {
        self.class
    }

    pub fn plan(&self) -> &BranchPlan {
        &self.plan
    }

    pub fn max_domain(&self) -> f64 {
        self.max_domain
    }

    /// The transform whose composition with `self` is the identity.
    pub fn inverse(&self) -> RootTransform {
        RootTransform::new(-self.lambda)
    }

    /// Evaluates `f(x, λ)`. Inputs above the domain are clamped to it; NaN
    /// propagates.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.plan.apply(x.min(self.max_domain))
    }

    /// Evaluates `∂f/∂x` at `x` (clamped like [`RootTransform::eval`]).
    ///
    /// Always of the form `exp(scale · log1p?(pre · x))`, so it is strictly
    /// positive wherever it is finite.
    pub fn derivative(&self, x: f64) -> f64 {
        let x = x.min(self.max_domain);
        let l = self.lambda.get();
        let scale = match self.class {
            BranchClass::Zero => return 1.0,
            BranchClass::PositiveOne | BranchClass::NegativeInfinity => 1.0,
            BranchClass::PositiveInfinity | BranchClass::NegativeOne => -1.0,
            BranchClass::Positive => l / (1.0 - l),
            BranchClass::Negative => l,
        };
        (scale * self.plan.inner(x)).exp()
    }
}

/// `f(x, λ)` evaluated with the `expm1`/`log1p` rewrite.
pub fn transform(x: f64, lambda: Lambda) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NanInput);
    }
    Ok(RootTransform::new(lambda).eval(x))
}

/// `f⁻¹(x, λ) = f(x, −λ)`.
pub fn inverse(x: f64, lambda: Lambda) -> Result<f64> {
    transform(x, -lambda)
}

/// `g(x, λ) = ∂f(x, λ)/∂x`.
pub fn derivative(x: f64, lambda: Lambda) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NanInput);
    }
    Ok(RootTransform::new(lambda).derivative(x))
}

/// The unguarded closed form, evaluated with `pow`, `exp` and `ln` only.
///
/// Exists as the comparison subject for the accuracy study. `λ = ±1` are
/// `0·∞` in the root form, so those two values use their exact limit rows
/// (`exp(x) − 1` and `ln(1 + x)`), still without `expm1`/`log1p`.
pub fn transform_naive(x: f64, lambda: Lambda) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NanInput);
    }
    let l = lambda.get();
    if !l.is_finite() || l.abs() < NumericPolicy::BINARY64.tiny {
        return Err(Error::UnsupportedBranch(lambda));
    }
    if l == 1.0 {
        return Ok(x.exp() - 1.0);
    }
    if l == -1.0 {
        return Ok((1.0 + x).ln());
    }
    let a = l.abs();
    let scale = 2.0 * a / (2.0 - a + l);
    let inner = (2.0 - a - l) / (2.0 * a);
    let power = (1.0 - a).powf(-l.signum());
    Ok(scale * ((1.0 + inner * x).powf(power) - 1.0))
}
