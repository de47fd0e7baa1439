//! Gamma function for real and complex arguments.
//!
//! Lanczos approximation (g = 7, nine coefficients) on `Re(a) >= 1/2`,
//! reflection `Gamma(a) Gamma(1-a) = pi / sin(pi a)` below that.

use num_complex::Complex;

use super::extended::{gamma_dd, DoubleDouble};
use super::scalar::{is_complex_nonpositive_integer, is_nonpositive_integer, Real};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
/// Above this the power term of the Lanczos form loses about `a` ulps;
/// the double-double Stirling evaluation takes over.
const EXTENDED_FROM: f64 = 20.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(pi x)` with the argument reduced exactly around the nearest integer.
pub fn sin_pi<T: Real>(x: T) -> T {
    let k = x.round();
    let r = (x - k) * T::PI();
    let s = r.sin();
    if (k.as_f64() as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn lanczos_sum<T: Real>(x: T) -> T {
    let mut sum = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum = sum + T::lit(c) / (x + T::lit(i as f64));
    }
    sum
}

fn lanczos_sum_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let mut sum = Complex::new(T::lit(LANCZOS_COEFFS[0]), T::zero());
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum = sum + Complex::new(T::lit(c), T::zero()) / (z + T::lit(i as f64));
    }
    sum
}

/// Gamma on the real line.
pub fn gamma_real<T: Real>(a: T) -> Result<T> {
    if !a.is_finite() {
        return Err(Error::Domain {
            function: "gamma",
            detail: format!("non-finite argument {}", a),
        });
    }
    if is_nonpositive_integer(a) {
        return Err(Error::Pole {
            function: "gamma",
            at: a.to_string(),
        });
    }
    let half = T::lit(0.5);
    let value = if a < half {
        let g = gamma_real(T::one() - a)?;
        T::PI() / (sin_pi(a) * g)
    } else if a > T::lit(EXTENDED_FROM) {
        T::lit(gamma_dd(DoubleDouble::new(a.as_f64()))?.to_f64())
    } else {
        let x = a - T::one();
        let w = x + T::lit(LANCZOS_G) + half;
        // w^(x+1/2) split in two halves so that neither factor overflows
        // before Gamma itself does.
        let h = w.powf((x + half) * half);
        T::lit(std::f64::consts::TAU).sqrt() * h * (h * (-w).exp()) * lanczos_sum(x)
    };
    if !value.is_finite() {
        return Err(Error::Overflow {
            function: "gamma",
            at: a.to_string(),
        });
    }
    Ok(value)
}

/// Gamma for complex arguments.
pub fn gamma<T: Real>(a: Complex<T>) -> Result<Complex<T>> {
    if a.im == T::zero() {
        return gamma_real(a.re).map(|v| Complex::new(v, T::zero()));
    }
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::Domain {
            function: "gamma",
            detail: format!("non-finite argument {}", a),
        });
    }
    let half = T::lit(0.5);
    let value = if a.re < half {
        let one = Complex::new(T::one(), T::zero());
        let g = gamma(one - a)?;
        let s = (a * T::PI()).sin();
        Complex::new(T::PI(), T::zero()) / (s * g)
    } else {
        let x = a - T::one();
        let w = x + T::lit(LANCZOS_G) + half;
        let log_pow = (x + half) * w.ln() - w;
        log_pow.exp() * T::lit(std::f64::consts::TAU).sqrt() * lanczos_sum_complex(x)
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Overflow {
            function: "gamma",
            at: a.to_string(),
        });
    }
    Ok(value)
}

/// `1/Gamma(a)`, which is entire: zero at the poles of Gamma.
pub fn recip_gamma<T: Real>(a: Complex<T>) -> Result<Complex<T>> {
    if is_complex_nonpositive_integer(a) {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    gamma(a).map(|g| g.inv())
}
