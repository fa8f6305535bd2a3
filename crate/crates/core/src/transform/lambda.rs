use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extended-real shape parameter. May be `±∞`, never NaN.
///
/// Parses from and renders to `inf`, `-inf` or a decimal literal.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Lambda(f64);

impl Lambda {
    pub const ZERO: Lambda = Lambda(0.0);
    pub const ONE: Lambda = Lambda(1.0);
    pub const NEG_ONE: Lambda = Lambda(-1.0);
    pub const INFINITY: Lambda = Lambda(f64::INFINITY);
    pub const NEG_INFINITY: Lambda = Lambda(f64::NEG_INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            Err(Error::NanLambda)
        } else {
            Ok(Lambda(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Compactified coordinate `λ / (1 + |λ|)`, mapping `[−∞, ∞]` onto `[−1, 1]`.
    pub fn compactified(self) -> f64 {
        match self.0 {
            v if v == f64::INFINITY => 1.0,
            v if v == f64::NEG_INFINITY => -1.0,
            v => v / (1.0 + v.abs()),
        }
    }

    /// Inverse of [`Lambda::compactified`]. `s` must lie in `[−1, 1]`.
    pub fn from_compactified(s: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&s) {
            return Err(Error::InvalidArgument(format!(
                "compactified coordinate {s} is outside [-1, 1]"
            )));
        }
        let v = if s == 1.0 {
            f64::INFINITY
        } else if s == -1.0 {
            f64::NEG_INFINITY
        } else {
            s / (1.0 - s.abs())
        };
        Ok(Lambda(v))
    }
}

impl Neg for Lambda {
    type Output = Lambda;

    fn neg(self) -> Lambda {
        Lambda(-self.0)
    }
}

impl TryFrom<f64> for Lambda {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Lambda::new(value)
    }
}

impl From<Lambda> for f64 {
    fn from(l: Lambda) -> f64 {
        l.0
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let value = match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => f64::INFINITY,
            "-inf" | "-infinity" => f64::NEG_INFINITY,
            lower if lower.contains("nan") => return Err(Error::ParseLambda(s.to_string())),
            _ => t.parse::<f64>().map_err(|_| Error::ParseLambda(s.to_string()))?,
        };
        Lambda::new(value)
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-inf")
        } else {
            // Shortest representation that parses back to the same value.
            write!(f, "{:?}", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_nan() {
        assert_eq!(Lambda::new(f64::NAN), Err(Error::NanLambda));
        assert!("nan".parse::<Lambda>().is_err());
        assert!("NaN".parse::<Lambda>().is_err());
    }

    #[test]
    fn parses_infinities() {
        assert_eq!("inf".parse::<Lambda>().unwrap(), Lambda::INFINITY);
        assert_eq!("-inf".parse::<Lambda>().unwrap(), Lambda::NEG_INFINITY);
        assert_eq!("-0.5".parse::<Lambda>().unwrap().get(), -0.5);
        assert_eq!(Lambda::INFINITY.to_string(), "inf");
        assert_eq!(Lambda::NEG_INFINITY.to_string(), "-inf");
        assert!("abc".parse::<Lambda>().is_err());
    }

    #[test]
    fn compactified_endpoints() {
        assert_eq!(Lambda::NEG_ONE.compactified(), -0.5);
        assert_eq!(Lambda::ZERO.compactified(), 0.0);
        assert_eq!(Lambda::INFINITY.compactified(), 1.0);
        assert_eq!(Lambda::from_compactified(-0.5).unwrap(), Lambda::NEG_ONE);
        assert_eq!(Lambda::from_compactified(1.0).unwrap(), Lambda::INFINITY);
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(v in prop::num::f64::ANY.prop_filter("not nan", |v| !v.is_nan())) {
            let l = Lambda::new(v).unwrap();
            let back: Lambda = l.to_string().parse().unwrap();
            prop_assert_eq!(back.get().to_bits(), v.to_bits());
        }
    }
}
