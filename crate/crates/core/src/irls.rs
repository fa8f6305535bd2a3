//! Robust location estimation by iteratively reweighted least squares.
//!
//! Each step replaces `μ` by the kernel-weighted mean of the observations,
//! with weights `k(xᵢ − μ, λ, c)`. For `λ ≤ 0` the loss is a concave function
//! of the squared residual, so every step is a majorize-minimize step and the
//! objective never increases.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{irls_weight, KernelParams};
use crate::loss::{check_scale, loss, LossParams};
use crate::transform::Lambda;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct IrlsProblem {
    observations: Vec<f64>,
    lambda: Lambda,
    c: f64,
    max_iters: usize,
    tol: f64,
}

impl IrlsProblem {
    pub fn new(observations: Vec<f64>, lambda: Lambda, c: f64) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptyObservations);
        }
        if let Some((index, &value)) = observations.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteObservation { index, value });
        }
        if !(lambda.get() <= 0.0) {
            return Err(Error::LambdaOutOfRange {
                lambda,
                reason: "IRLS only majorizes the loss for lambda <= 0",
            });
        }
        Ok(IrlsProblem {
            observations,
            lambda,
            c: check_scale(c)?,
            max_iters: DEFAULT_MAX_ITERS,
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive and finite, got {tol}"
            )));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Result<Self> {
        if max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be positive".into()));
        }
        self.max_iters = max_iters;
        Ok(self)
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn scale(&self) -> f64 {
        self.c
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }

    /// Median of the observations; the mean of the middle pair for even counts.
    pub fn median(&self) -> f64 {
        let mut v = self.observations.clone();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }

    fn kernel(&self) -> KernelParams {
        KernelParams::new(self.lambda, self.c).expect("validated on construction")
    }

    /// `|d/dμ Σ ρ(xᵢ − μ)|`.
    pub fn grad_norm(&self, mu: f64) -> f64 {
        let k = self.kernel();
        let s: f64 = self
            .observations
            .iter()
            .map(|&x| irls_weight(x - mu, &k) * (x - mu))
            .sum();
        s.abs() / (self.c * self.c)
    }

    /// Iterates starting at the median, one item per update of `μ`.
    pub fn iterates(&self) -> Iterates<'_> {
        Iterates {
            problem: self,
            kernel: self.kernel(),
            mu: self.median(),
            done: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IrlsResult {
    pub mu: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
}

/// One IRLS update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub mu: f64,
    /// `|Δμ|` of this update.
    pub step: f64,
}

/// Unbounded stream of IRLS updates. Ends early only if every weight
/// underflows to zero.
#[derive(Clone, Debug)]
pub struct Iterates<'a> {
    problem: &'a IrlsProblem,
    kernel: KernelParams,
    mu: f64,
    done: bool,
}

impl Iterates<'_> {
    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl Iterator for Iterates<'_> {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        if self.done {
            return None;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for &x in &self.problem.observations {
            let w = irls_weight(x - self.mu, &self.kernel);
            num += w * x;
            den += w;
        }
        if !(den > 0.0) {
            self.done = true;
            return None;
        }
        let next = num / den;
        let step = (next - self.mu).abs();
        self.mu = next;
        Some(Step { mu: next, step })
    }
}

/// Runs IRLS until `|Δμ| ≤ tol·(1 + |μ|)` or `max_iters` updates.
pub fn irls_location(problem: &IrlsProblem) -> IrlsResult {
    let mut it = problem.iterates();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < problem.max_iters {
        let Some(step) = it.next() else { break };
        iterations += 1;
        if step.step <= problem.tol * (1.0 + step.mu.abs()) {
            converged = true;
            break;
        }
    }
    let mu = it.mu();
    IrlsResult {
        mu,
        iterations,
        grad_norm: problem.grad_norm(mu),
        converged,
    }
}

/// `Σ ρ(xᵢ − μ, λ, c)`.
pub fn loss_objective(mu: f64, problem: &IrlsProblem) -> f64 {
    let p = LossParams::new(problem.lambda, problem.c).expect("validated on construction");
    problem.observations.iter().map(|&x| loss(x - mu, &p)).sum()
}
