use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive, Zero};

/// Real scalar the numerical core is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every `f64` is representable (possibly
    /// rounded) in both supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Values a quadrature can accumulate: real scalars and complex numbers
/// over the same real type.
pub trait QuadValue<T: Real>:
    Copy + Debug + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Send + Sync
{
    /// Modulus used for error estimates and tolerances.
    fn modulus(self) -> T;
    fn is_finite_value(self) -> bool;
}

macro_rules! impl_quad_value {
    ($t:ty) => {
        impl QuadValue<$t> for $t {
            #[inline]
            fn modulus(self) -> $t {
                self.abs()
            }
            #[inline]
            fn is_finite_value(self) -> bool {
                self.is_finite()
            }
        }
    };
}

impl<T: Real> QuadValue<T> for Complex<T> {
    #[inline]
    fn modulus(self) -> T {
        self.norm()
    }
    #[inline]
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl_quad_value!(f32);
impl_quad_value!(f64);

/// True when `x` is within `tol` of an integer.
pub fn near_integer<T: Real>(x: T, tol: T) -> bool {
    (x - x.round()).abs() < tol
}

/// True for 0, -1, -2, ... exactly.
pub fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// Complex analogue of [`is_nonpositive_integer`]: zero imaginary part and a
/// non-positive integer real part.
pub fn is_complex_nonpositive_integer<T: Real>(z: Complex<T>) -> bool {
    z.im == T::zero() && is_nonpositive_integer(z.re)
}
