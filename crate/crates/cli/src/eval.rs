use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, ensure, Context, Result};
use clap::ValueEnum;
use rootpow::boxcox::{box_cox, box_cox_normalized, BoxCoxLambda};
use rootpow::bump::{bump, BumpParams};
use rootpow::distribution::{DistParams, Density, ZSource, ZTable};
use rootpow::kernel::{kernel, KernelParams};
use rootpow::loss::{loss, LossParams};
use rootpow::signed::{relu, sigmoid, signed_transform, softplus, tanh, SignedParams};
use rootpow::{Lambda, RootTransform};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "lower")]
pub enum Function {
    F,
    Finv,
    G,
    Rho,
    K,
    Pdf,
    Bump,
    Fpm,
    Softplus,
    Sigmoid,
    Tanh,
    Relu,
    H,
    Hhat,
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

/// `a,b,c` or an inclusive range `lo:hi:count`.
#[derive(Clone, Debug, PartialEq)]
pub struct XSpec(pub Vec<f64>);

impl FromStr for XSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<f64> {
            let v: f64 = t.trim().parse().with_context(|| format!("bad number `{t}`"))?;
            ensure!(!v.is_nan(), "x must not be NaN");
            Ok(v)
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [lo, hi, count] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                ensure!(lo.is_finite() && hi.is_finite(), "range ends must be finite");
                ensure!(lo <= hi, "range must have lo <= hi");
                let n: usize = count
                    .trim()
                    .parse()
                    .with_context(|| format!("bad count `{count}`"))?;
                ensure!(n >= 1, "range count must be at least 1");
                if n == 1 {
                    return Ok(XSpec(vec![lo]));
                }
                let step = (hi - lo) / (n - 1) as f64;
                let mut xs: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
                xs[n - 1] = hi;
                Ok(XSpec(xs))
            }
            [list] => Ok(XSpec(
                list.split(',').map(num).collect::<Result<Vec<_>>>()?,
            )),
            _ => bail!("expected a comma-separated list or lo:hi:count, got `{s}`"),
        }
    }
}

pub struct EvalRequest<'a> {
    pub function: Function,
    pub lambda: Option<Lambda>,
    pub lambda_neg: Option<Lambda>,
    pub c: f64,
    pub ztable: Option<&'a ZTable>,
    pub num_points: usize,
}

type Evaluator = Box<dyn Fn(f64) -> Result<f64>>;

impl EvalRequest<'_> {
    fn lambda(&self) -> Result<Lambda> {
        self.lambda
            .ok_or_else(|| anyhow!("--fn {} needs --lambda", self.function))
    }

    fn box_cox_lambda(&self) -> Result<BoxCoxLambda> {
        Ok(BoxCoxLambda::new(self.lambda()?.get())?)
    }

    /// Validates parameters up front and returns the pointwise function.
    pub fn evaluator(&self) -> Result<Evaluator> {
        use Function::*;
        let c = self.c;
        Ok(match self.function {
            F => {
                let t = RootTransform::new(self.lambda()?);
                Box::new(move |x| Ok(t.eval(x)))
            }
            Finv => {
                let t = RootTransform::new(self.lambda()?).inverse();
                Box::new(move |x| Ok(t.eval(x)))
            }
            G => {
                let t = RootTransform::new(self.lambda()?);
                Box::new(move |x| Ok(t.derivative(x)))
            }
            Rho => {
                let p = LossParams::new(self.lambda()?, c)?;
                Box::new(move |x| Ok(loss(x, &p)))
            }
            K => {
                let p = KernelParams::new(self.lambda()?, c)?;
                Box::new(move |x| Ok(kernel(x, &p)))
            }
            Pdf => {
                let params = DistParams::new(self.lambda()?, c)?;
                let source = match self.ztable {
                    Some(t) => ZSource::Table(t),
                    None => ZSource::Quadrature {
                        num_points: self.num_points,
                    },
                };
                let d = Density::new(params, source)?;
                Box::new(move |x| Ok(d.pdf(x)))
            }
            Bump => {
                let p = BumpParams::new(self.lambda()?)?;
                Box::new(move |x| Ok(bump(x, &p)))
            }
            Fpm => {
                let pos = self.lambda()?;
                let neg = self
                    .lambda_neg
                    .ok_or_else(|| anyhow!("--fn fpm needs --lambda-neg"))?;
                let p = SignedParams::new(pos, neg);
                Box::new(move |x| Ok(signed_transform(x, &p)))
            }
            Softplus => Box::new(|x| Ok(softplus(x))),
            Sigmoid => Box::new(|x| Ok(sigmoid(x))),
            Tanh => Box::new(|x| Ok(tanh(x))),
            Relu => {
                let neg = self.lambda_neg.unwrap_or(Lambda::ZERO);
                Box::new(move |x| Ok(relu(x, neg)))
            }
            H => {
                let l = self.box_cox_lambda()?;
                Box::new(move |x| Ok(box_cox(x, l)?))
            }
            Hhat => {
                let l = self.box_cox_lambda()?;
                Box::new(move |x| Ok(box_cox_normalized(x, l)?))
            }
        })
    }
}

/// Shortest decimal that parses back to the same double; `inf`, `-inf` and
/// `nan` for the non-finite values.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges_and_lists() {
        assert_eq!("0:1:3".parse::<XSpec>().unwrap().0, vec![0.0, 0.5, 1.0]);
        assert_eq!("-1:-1:1".parse::<XSpec>().unwrap().0, vec![-1.0]);
        assert_eq!("1, 2.5,-3".parse::<XSpec>().unwrap().0, vec![1.0, 2.5, -3.0]);
        assert_eq!("0.1:0.3:3".parse::<XSpec>().unwrap().0.last(), Some(&0.3));
        for bad in ["", "a", "1:0:3", "0:1:0", "0:1", "0:1:2:3", "nan", "0:inf:3"] {
            assert!(bad.parse::<XSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_round_trip() {
        for v in [0.0, -0.0, 0.1, 1.0 / 3.0, 1e-300, 5e-324, 1.7976931348623157e308] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_f64(f64::NAN), "nan");
    }
}
