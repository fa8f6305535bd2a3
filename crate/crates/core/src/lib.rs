//! A self-inverting power transform `f(x, λ)` and the families built on it:
//! robust losses, stationary kernels, normalized densities, bump functions,
//! signed transforms and activations, and a bridge to Box-Cox.
//!
//! All evaluation is scalar and pure. The transform itself is computed with
//! `expm1`/`log1p` so it stays accurate near the removable singularities at
//! `λ ∈ {0, ±1, ±∞}`; [`accuracy`] measures how much that buys over the
//! textbook closed form.

pub mod accuracy;
pub mod boxcox;
pub mod bump;
pub mod distribution;
pub mod error;
pub mod irls;
pub mod kernel;
pub mod loss;
pub mod signed;
pub mod transform;

pub use error::{Error, Result};
pub use transform::{
    derivative, inverse, max_domain, transform, transform_naive, BranchClass, BranchPlan, Lambda,
    NumericPolicy, RootTransform,
};
