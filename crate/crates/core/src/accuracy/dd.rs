//! Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`,
//! good for roughly 106 significant bits.
//!
//! Only what the reference evaluator needs is provided: the four operations,
//! `sqrt`, `exp`, `expm1` and `log1p`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `ln 2` to double-double precision.
pub const LN_2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    /// Nearest double.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Multiplication by `2^k`.
    pub fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::from(self.hi.sqrt());
        }
        let x = self.hi.sqrt();
        let r = self - Dd::prod(x, x);
        Dd::from(x) + r * (0.5 / x)
    }

    /// `eˣ − 1`.
    pub fn expm1(self) -> Self {
        if self.hi == 0.0 {
            return self;
        }
        if self.hi.abs() > 0.5 {
            return self.exp() - Dd::ONE;
        }
        expm1_small(self)
    }

    /// `eˣ`.
    pub fn exp(self) -> Self {
        if self.hi > 709.8 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2 * k;
        (Dd::ONE + expm1_small(r)).ldexp(k as i32)
    }

    /// `ln(1 + x)` for `x > −1`, by Newton's method on `expm1`.
    pub fn log1p(self) -> Self {
        if self.hi == 0.0 {
            return self;
        }
        let mut y = Dd::from(self.hi.ln_1p());
        if !y.hi.is_finite() {
            return y;
        }
        for _ in 0..2 {
            let e = y.expm1();
            y = y + (self - e) / (Dd::ONE + e);
        }
        y
    }
}

/// `expm1` for `|x| ≤ ½`: Taylor series at `x/2¹⁰`, then ten applications of
/// `s ↦ s(s + 2)`, which doubles the argument without cancellation.
fn expm1_small(x: Dd) -> Dd {
    const HALVINGS: i32 = 10;
    const TERMS: u32 = 14;
    let r = x.ldexp(-HALVINGS);
    let mut s = Dd::ONE;
    for n in (2..=TERMS).rev() {
        s = Dd::ONE + r * s / n as f64;
    }
    s = r * s;
    for _ in 0..HALVINGS {
        s = s * (s + 2.0);
    }
    s
}

impl From<f64> for Dd {
    #[inline]
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        Dd::new(q1, q2) + Dd::from(q3)
    }
}

macro_rules! with_f64 {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Dd {
            type Output = Dd;
            #[inline]
            fn $m(self, b: f64) -> Dd {
                self.$m(Dd::from(b))
            }
        }
        impl $tr<Dd> for f64 {
            type Output = Dd;
            #[inline]
            fn $m(self, b: Dd) -> Dd {
                Dd::from(self).$m(b)
            }
        }
    )*};
}

with_f64!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: Dd, rel: f64) -> bool {
        ((a - b).to_f64()).abs() <= rel * b.to_f64().abs()
    }

    #[test]
    fn error_free_transforms() {
        let a = Dd::sum(1.0, 1e-20);
        assert_eq!((a.hi, a.lo), (1.0, 1e-20));
        let p = Dd::prod(1.0 + f64::EPSILON, 1.0 + f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn arithmetic_identities() {
        let third = Dd::ONE / 3.0;
        assert!(close(third * 3.0, Dd::ONE, 1e-31));
        let two = Dd::from(2.0).sqrt();
        assert!(close(two * two, Dd::from(2.0), 1e-31));
        assert_eq!(two.hi, std::f64::consts::SQRT_2);
    }

    #[test]
    fn ln2_constant_is_consistent() {
        // e^{ln 2} = 2 pins the low word.
        let two = LN_2.exp();
        assert!(((two - 2.0).to_f64()).abs() < 1e-30);
    }

    #[test]
    fn exp_log_round_trip() {
        for x in [1e-30, 1e-9, 0.001, 0.3, -0.4, 0.5, 0.75, 3.0, -7.5, 40.0, 600.0] {
            let d = Dd::from(x);
            let back = d.expm1().log1p();
            assert!(close(back, d, 1e-30), "x={x}: {back:?}");
        }
    }

    #[test]
    fn matches_f64_to_working_precision() {
        for x in [1e-10, 0.01, 0.25, 0.5, 0.9, 2.0, -0.3, -3.0, 100.0] {
            assert!((Dd::from(x).expm1().to_f64() - x.exp_m1()).abs() <= 2.0 * f64::EPSILON * x.exp_m1().abs());
            assert!((Dd::from(x).exp().to_f64() - x.exp()).abs() <= 2.0 * f64::EPSILON * x.exp());
        }
        for x in [1e-10, 0.01, 0.25, 1.0, 1e5, -0.5, -0.999] {
            assert!((Dd::from(x).log1p().to_f64() - x.ln_1p()).abs() <= 2.0 * f64::EPSILON * x.ln_1p().abs());
        }
    }
}
