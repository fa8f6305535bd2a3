//! Robust losses `ρ(x, λ, c) = f(½(x/c)², λ)`.
//!
//! `λ = 0` is the quadratic loss; decreasing `λ` towards `−∞` makes the loss
//! progressively more robust (Cauchy at `−1`, Welsch at `−∞`). For `λ > 1`
//! the argument is clamped to the transform's domain, so the loss saturates
//! at a large finite value instead of overflowing to NaN.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::transform::{Lambda, RootTransform};

/// Validates a scale parameter: finite and strictly positive.
pub(crate) fn check_scale(c: f64) -> Result<f64> {
    if c.is_finite() && c > 0.0 {
        Ok(c)
    } else {
        Err(Error::InvalidScale(c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossParams {
    transform: RootTransform,
    c: f64,
}

impl LossParams {
    pub fn new(lambda: Lambda, c: f64) -> Result<Self> {
        Ok(LossParams {
            transform: RootTransform::new(lambda),
            c: check_scale(c)?,
        })
    }

    /// Unit scale.
    pub fn with_lambda(lambda: Lambda) -> Self {
        LossParams {
            transform: RootTransform::new(lambda),
            c: 1.0,
        }
    }

    pub fn lambda(&self) -> Lambda {
        self.transform.lambda()
    }

    pub fn scale(&self) -> f64 {
        self.c
    }
}

/// `ρ(x, λ, c)`. Even in `x`, zero at the origin, never negative.
#[inline]
pub fn loss(x: f64, params: &LossParams) -> f64 {
    let z = x / params.c;
    params.transform.eval(0.5 * z * z)
}

/// `∂ρ/∂x`, through the analytic derivative of the transform.
pub fn loss_derivative(x: f64, params: &LossParams) -> f64 {
    let z = x / params.c;
    params.transform.derivative(0.5 * z * z) * z / params.c
}

/// Robust losses from the literature that are members of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedLoss {
    L2,
    Cauchy,
    Welsch,
    Charbonnier,
    GemanMcClure,
}

impl NamedLoss {
    pub const ALL: [NamedLoss; 5] = [
        NamedLoss::L2,
        NamedLoss::Cauchy,
        NamedLoss::Welsch,
        NamedLoss::Charbonnier,
        NamedLoss::GemanMcClure,
    ];

    /// The shape parameter at which the family reproduces this loss.
    pub fn lambda(self) -> Lambda {
        match self {
            NamedLoss::L2 => Lambda::ZERO,
            NamedLoss::Cauchy => Lambda::NEG_ONE,
            NamedLoss::Welsch => Lambda::NEG_INFINITY,
            NamedLoss::Charbonnier => Lambda::new(-0.5).unwrap(),
            NamedLoss::GemanMcClure => Lambda::new(-2.0).unwrap(),
        }
    }

    /// Textbook closed form of the loss, independent of the transform.
    pub fn eval(self, x: f64, c: f64) -> f64 {
        let z = x / c;
        let q = z * z;
        match self {
            NamedLoss::L2 => 0.5 * q,
            NamedLoss::Cauchy => (1.0 + 0.5 * q).ln(),
            NamedLoss::Welsch => 1.0 - (-0.5 * q).exp(),
            NamedLoss::Charbonnier => (q + 1.0).sqrt() - 1.0,
            NamedLoss::GemanMcClure => 2.0 * x * x / (4.0 * c * c + x * x),
        }
    }
}

impl FromStr for NamedLoss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "l2" | "quadratic" => Ok(NamedLoss::L2),
            "cauchy" | "lorentzian" => Ok(NamedLoss::Cauchy),
            "welsch" | "leclerc" => Ok(NamedLoss::Welsch),
            "charbonnier" => Ok(NamedLoss::Charbonnier),
            "gemanmcclure" => Ok(NamedLoss::GemanMcClure),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for NamedLoss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            NamedLoss::L2 => "L2",
            NamedLoss::Cauchy => "Cauchy",
            NamedLoss::Welsch => "Welsch",
            NamedLoss::Charbonnier => "Charbonnier",
            NamedLoss::GemanMcClure => "GemanMcClure",
        };
        f.write_str(name)
    }
}

/// Closed-form value of a named loss, looked up by name.
pub fn reference_loss(x: f64, name: &str, c: f64) -> Result<f64> {
    let which: NamedLoss = name.parse()?;
    Ok(which.eval(x, check_scale(c)?))
}
