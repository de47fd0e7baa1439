//! Double-double arithmetic (an unevaluated sum `hi + lo` of two `f64`s,
//! about 32 significant digits) with `exp`, `ln` and the gamma function.
//!
//! Used where a formula is evaluated exactly as written but suffers
//! cancellation far beyond double precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
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

const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};
const TAU: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::TAU,
    lo: 2.449_293_598_294_706_4e-16,
};

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Multiplication by `2^k`, exact.
    fn ldexp(self, k: i32) -> Self {
        // two factors, so that 2^k itself never overflows
        let s1 = 2f64.powi(k / 2);
        let s2 = 2f64.powi(k - k / 2);
        Self {
            hi: self.hi * s1 * s2,
            lo: self.lo * s1 * s2,
        }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.79 {
            return Self::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * k).ldexp(-10);
        // expm1(r) by Taylor; |r| < 4e-4
        let mut term = r;
        let mut sum = r;
        for i in 2..=12 {
            term = term * r / i as f64;
            sum = sum + term;
        }
        // (1 + s)^2 - 1 = s (2 + s), ten times
        for _ in 0..10 {
            sum = sum * (sum + 2.0);
        }
        (sum + 1.0).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        let mut y = Self::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - 1.0;
        }
        y
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::new(q3)
    }
}

macro_rules! with_f64 {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for DoubleDouble {
            type Output = Self;
            fn $m(self, b: f64) -> Self {
                $tr::$m(self, DoubleDouble::new(b))
            }
        }
    )*};
}
with_f64!(Add add, Sub sub, Mul mul, Div div);

// B_2k / (2k (2k - 1)) as numerator / denominator, k = 1..15.
const STIRLING: [(f64, f64); 15] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360_360.0),
    (1.0, 156.0),
    (-3617.0, 122_400.0),
    (43867.0, 244_188.0),
    (-174_611.0, 125_400.0),
    (77683.0, 5796.0),
    (-236_364_091.0, 1_506_960.0),
    (657_931.0, 300.0),
    (-3_392_780_147.0, 93_960.0),
    (1_723_168_255_201.0, 2_492_028.0),
];

/// Shift applied before the Stirling series.
const STIRLING_SHIFT: f64 = 25.0;

/// `ln Gamma(z)` for `z >= 25`.
fn ln_gamma_large(z: DoubleDouble) -> DoubleDouble {
    let w = DoubleDouble::ONE / z;
    let w2 = w * w;
    let mut series = DoubleDouble::ZERO;
    for &(num, den) in STIRLING.iter().rev() {
        series = series * w2 + DoubleDouble::new(num) / den;
    }
    (z - 0.5) * z.ln() - z + TAU.ln() * 0.5 + series * w
}

/// `(x)_N` and `x + N` with `N` the smallest shift taking `x` to at least 25.
fn shift_up(x: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let mut prod = DoubleDouble::ONE;
    let mut z = x;
    while z.hi < STIRLING_SHIFT {
        prod = prod * z;
        z = z + 1.0;
    }
    (prod, z)
}

/// `Gamma(x)` for real `x`; poles at the non-positive integers.
pub fn gamma_dd(x: DoubleDouble) -> Result<DoubleDouble> {
    if !x.is_finite() || x.hi > 171.7 {
        return Err(Error::Overflow {
            function: "gamma_dd",
            at: format!("x = {}", x.to_f64()),
        });
    }
    let (prod, z) = shift_up(x);
    if prod.hi == 0.0 {
        return Err(Error::Pole {
            function: "gamma_dd",
            at: format!("x = {}", x.to_f64()),
        });
    }
    let value = ln_gamma_large(z).exp() / prod;
    if !value.is_finite() {
        return Err(Error::Overflow {
            function: "gamma_dd",
            at: format!("x = {}", x.to_f64()),
        });
    }
    Ok(value)
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn recip_gamma_dd(x: DoubleDouble) -> Result<DoubleDouble> {
    if !x.is_finite() || x.hi > 171.7 {
        return Err(Error::Overflow {
            function: "recip_gamma_dd",
            at: format!("x = {}", x.to_f64()),
        });
    }
    let (prod, z) = shift_up(x);
    Ok(prod * (-ln_gamma_large(z)).exp())
}
