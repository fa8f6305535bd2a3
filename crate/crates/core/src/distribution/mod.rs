//! Densities `P(x, λ, c) = exp(−ρ(x, λ, c)) / (c·Z(λ))` for `λ ≥ −1`.
//!
//! `Z(λ)` has no closed form in general. [`partition_quadrature`] integrates
//! it with composite Simpson on a logarithmically warped grid, and
//! [`ZTable`] caches `log Z` over the compactified `λ` axis.

mod ztable;

pub use ztable::{build_ztable, z_lookup, ZTable};

use crate::error::{Error, Result};
use crate::loss::{check_scale, loss, LossParams};
use crate::transform::{Lambda, RootTransform};

/// Node count used when none is given.
pub const DEFAULT_NUM_POINTS: usize = 4096;

fn check_density_lambda(lambda: Lambda) -> Result<Lambda> {
    if lambda.get() >= -1.0 {
        Ok(lambda)
    } else {
        Err(Error::LambdaOutOfRange {
            lambda,
            reason: "the density is undefined for lambda < -1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistParams {
    lambda: Lambda,
    c: f64,
}

impl DistParams {
    pub fn new(lambda: Lambda, c: f64) -> Result<Self> {
        Ok(DistParams {
            lambda: check_density_lambda(lambda)?,
            c: check_scale(c)?,
        })
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn scale(&self) -> f64 {
        self.c
    }
}

/// Half-width of the support at unit scale: `√(2λ/(λ−1))` for `1 < λ < ∞`,
/// `√2` at `λ = ∞`, unbounded otherwise.
pub fn support_bound(lambda: Lambda) -> Result<f64> {
    let l = check_density_lambda(lambda)?.get();
    Ok(if l <= 1.0 {
        f64::INFINITY
    } else if l == f64::INFINITY {
        std::f64::consts::SQRT_2
    } else {
        (2.0 * l / (l - 1.0)).sqrt()
    })
}

/// `Z(λ) = ∫ exp(−ρ(x, λ, 1)) dx`.
///
/// Integrates over `[0, x_max]` and doubles, where `x_max` is where the
/// unnormalized density falls to `eps²`. Nodes are `x = expm1(u)` for `u`
/// uniform on `[0, log1p(x_max)]`; Simpson's rule is applied in `u` with the
/// Jacobian `dx/du = 1 + x`. An even `num_points` is bumped by one so the
/// rule sees an even number of intervals.
pub fn partition_quadrature(lambda: Lambda, num_points: usize) -> Result<f64> {
    check_density_lambda(lambda)?;
    if num_points < 3 {
        return Err(Error::InvalidArgument(format!(
            "Simpson's rule needs at least 3 nodes, got {num_points}"
        )));
    }
    let n = if num_points % 2 == 0 {
        num_points + 1
    } else {
        num_points
    };
    let t = RootTransform::new(lambda);
    let eps = f64::EPSILON;
    let x_max = (2.0 * t.inverse().eval(-(eps * eps).ln())).sqrt();
    let u_max = x_max.ln_1p();
    let h = u_max / (n - 1) as f64;
    let integrand = |i: usize| {
        let x = (i as f64 * h).exp_m1();
        (-t.eval(0.5 * x * x)).exp() * (1.0 + x)
    };
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n - 1 {
        if i % 2 == 1 {
            odd += integrand(i);
        } else {
            even += integrand(i);
        }
    }
    let sum = integrand(0) + 4.0 * odd + 2.0 * even + integrand(n - 1);
    Ok(2.0 * sum * h / 3.0)
}

/// Where `Z(λ)` comes from when building a [`Density`].
#[derive(Clone, Copy, Debug)]
pub enum ZSource<'a> {
    Quadrature { num_points: usize },
    Table(&'a ZTable),
}

impl Default for ZSource<'_> {
    fn default() -> Self {
        ZSource::Quadrature {
            num_points: DEFAULT_NUM_POINTS,
        }
    }
}

/// A normalized density with its partition function resolved once.
#[derive(Clone, Copy, Debug)]
pub struct Density {
    loss: LossParams,
    z: f64,
    support: f64,
}

impl Density {
    pub fn new(params: DistParams, source: ZSource<'_>) -> Result<Self> {
        let z = match source {
            ZSource::Quadrature { num_points } => partition_quadrature(params.lambda, num_points)?,
            ZSource::Table(table) => table.lookup(params.lambda)?,
        };
        Ok(Density {
            loss: LossParams::new(params.lambda, params.c)?,
            z,
            support: support_bound(params.lambda)? * params.c,
        })
    }

    pub fn partition(&self) -> f64 {
        self.z
    }

    /// Half-width of the support at this scale.
    pub fn support(&self) -> f64 {
        self.support
    }

    /// Exactly zero at and beyond the support bound.
    pub fn pdf(&self, x: f64) -> f64 {
        if x.abs() >= self.support {
            return 0.0;
        }
        // Dividing by Z first makes pdf(x, c) and pdf(x/c, 1)/c round identically.
        (-loss(x, &self.loss)).exp() / self.z / self.loss.scale()
    }
}

/// One-shot `P(x, λ, c)`. Prefer [`Density`] when evaluating many points.
pub fn pdf(x: f64, params: DistParams, source: ZSource<'_>) -> Result<f64> {
    Ok(Density::new(params, source)?.pdf(x))
}
