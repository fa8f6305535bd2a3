//! Stationary kernels `k(x, λ, c) = g(½(x/c)², λ)`, where `g` is the
//! derivative of the transform and `x` is a distance.
//!
//! The kernel equals `(c²/x)·∂ρ/∂x`, but that form divides by `x` and is
//! never used here. With the `c²` factor dropped, the kernel is also the
//! iteratively-reweighted-least-squares weight for minimizing `ρ`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::loss::check_scale;
use crate::transform::{Lambda, RootTransform};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    transform: RootTransform,
    c: f64,
}

impl KernelParams {
    pub fn new(lambda: Lambda, c: f64) -> Result<Self> {
        Ok(KernelParams {
            transform: RootTransform::new(lambda),
            c: check_scale(c)?,
        })
    }

    pub fn lambda(&self) -> Lambda {
        self.transform.lambda()
    }

    pub fn scale(&self) -> f64 {
        self.c
    }
}

/// `k(x, λ, c)`; `1` at the origin, positive and even.
#[inline]
pub fn kernel(x: f64, params: &KernelParams) -> f64 {
    let z = x / params.c;
    params.transform.derivative(0.5 * z * z)
}

/// Weight of a residual in one IRLS step.
#[inline]
pub fn irls_weight(residual: f64, params: &KernelParams) -> f64 {
    kernel(residual, params)
}

/// Kernels from the literature that are members of the family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedKernel {
    /// `λ = −∞`.
    Gaussian,
    /// `λ = −1`.
    Inverse,
    /// `−∞ < λ < 0`; carries its shape parameter.
    RationalQuadratic(f64),
    /// `λ = ½`.
    Quadratic,
    /// `λ = ⅓`.
    Multiquadric,
    /// `λ = −½`.
    InverseMultiquadric,
}

impl NamedKernel {
    pub fn lambda(self) -> Lambda {
        let v = match self {
            NamedKernel::Gaussian => f64::NEG_INFINITY,
            NamedKernel::Inverse => -1.0,
            NamedKernel::RationalQuadratic(l) => l,
            NamedKernel::Quadratic => 0.5,
            NamedKernel::Multiquadric => 1.0 / 3.0,
            NamedKernel::InverseMultiquadric => -0.5,
        };
        Lambda::new(v).expect("named kernels have non-NaN lambda")
    }

    /// Textbook closed form, independent of the transform.
    pub fn eval(self, x: f64, c: f64) -> f64 {
        let q = (x / c) * (x / c);
        match self {
            NamedKernel::Gaussian => (-0.5 * q).exp(),
            NamedKernel::Inverse => 2.0 * c * c / (2.0 * c * c + x * x),
            NamedKernel::RationalQuadratic(l) => (1.0 - q / (2.0 * l)).powf(l),
            NamedKernel::Quadratic => 1.0 + 0.5 * q,
            NamedKernel::Multiquadric => (1.0 + q).sqrt(),
            NamedKernel::InverseMultiquadric => 1.0 / (1.0 + q).sqrt(),
        }
    }
}

impl FromStr for NamedKernel {
    type Err = Error;

    /// Accepts e.g. `gaussian`, `inverse`, `quadratic`, `multiquadric`,
    /// `inverse-multiquadric` and `rational-quadratic:-3`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName(s.to_string());
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let key: String = head
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let kernel = match (key.as_str(), arg) {
            ("gaussian" | "rbf", None) => NamedKernel::Gaussian,
            ("inverse", None) => NamedKernel::Inverse,
            ("quadratic", None) => NamedKernel::Quadratic,
            ("multiquadric", None) => NamedKernel::Multiquadric,
            ("inversemultiquadric", None) => NamedKernel::InverseMultiquadric,
            ("rationalquadratic", Some(a)) => {
                let l: f64 = a.trim().parse().map_err(|_| unknown())?;
                if !(l < 0.0 && l.is_finite()) {
                    return Err(Error::LambdaOutOfRange {
                        lambda: Lambda::new(l).map_err(|_| unknown())?,
                        reason: "the rational quadratic kernel needs a finite negative lambda",
                    });
                }
                NamedKernel::RationalQuadratic(l)
            }
            _ => return Err(unknown()),
        };
        Ok(kernel)
    }
}

impl fmt::Display for NamedKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedKernel::Gaussian => f.write_str("Gaussian"),
            NamedKernel::Inverse => f.write_str("Inverse"),
            NamedKernel::RationalQuadratic(l) => write!(f, "RationalQuadratic({l})"),
            NamedKernel::Quadratic => f.write_str("Quadratic"),
            NamedKernel::Multiquadric => f.write_str("Multiquadric"),
            NamedKernel::InverseMultiquadric => f.write_str("InverseMultiquadric"),
        }
    }
}

/// Closed-form value of a named kernel, looked up by name.
pub fn reference_kernel(x: f64, name: &str, c: f64) -> Result<f64> {
    let which: NamedKernel = name.parse()?;
    Ok(which.eval(x, check_scale(c)?))
}
