//! Power series for Kummer's `1F1` and Gauss's `2F1`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{is_complex_nonpositive_integer, is_nonpositive_integer, Real};

/// Terms below `SERIES_STOP * |partial sum|` for `SERIES_STREAK` consecutive
/// steps (while the term ratio is below one) end the summation.
pub(crate) const SERIES_STOP: f64 = 1e-17;
pub(crate) const SERIES_STREAK: usize = 3;
pub(crate) const SERIES_MAX_TERMS: usize = 100_000;

/// Kummer's confluent hypergeometric function
/// `M(a, c; x) = sum_j (a)_j / (c)_j x^j / j!`.
pub fn kummer_m<T: Real>(a: Complex<T>, c: Complex<T>, x: T) -> Result<Complex<T>> {
    if is_complex_nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "kummer_m",
            at: format!("c = {}", c),
        });
    }
    if !(x.abs() <= T::lit(700.0)) {
        return Err(Error::Domain {
            function: "kummer_m",
            detail: format!("|x| = {} exceeds the overflow guard 700", x),
        });
    }
    let stop = T::lit(SERIES_STOP);
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    let mut streak = 0;
    for j in 0..SERIES_MAX_TERMS {
        let jt = T::lit(j as f64);
        let ratio = (a + jt) * x / ((c + jt) * (jt + T::one()));
        term = term * ratio;
        sum = sum + term;
        if term.norm() <= stop * sum.norm() && ratio.norm() < T::one() {
            streak += 1;
            if streak >= SERIES_STREAK {
                return Ok(sum);
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "kummer_m series",
        detail: format!("{} terms at a = {}, c = {}, x = {}", SERIES_MAX_TERMS, a, c, x),
    })
}

/// Gauss's hypergeometric series `2F1(a, b; c; x)`, for `|x| < 1` or when
/// the series terminates.
pub fn gauss_2f1<T: Real>(a: T, b: T, c: T, x: T) -> Result<T> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "gauss_2f1",
            at: format!("c = {}", c),
        });
    }
    let terminates = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if !terminates && !(x.abs() < T::one()) {
        return Err(Error::NonConvergence {
            what: "gauss_2f1 series",
            detail: format!("|x| = {} >= 1 and the series does not terminate", x.abs()),
        });
    }
    let stop = T::lit(SERIES_STOP);
    let mut term = T::one();
    let mut sum = term;
    let mut streak = 0;
    for j in 0..SERIES_MAX_TERMS {
        let jt = T::lit(j as f64);
        let ratio = (a + jt) * (b + jt) * x / ((c + jt) * (jt + T::one()));
        term = term * ratio;
        sum = sum + term;
        if term == T::zero() {
            return Ok(sum);
        }
        if term.abs() <= stop * sum.abs() && ratio.abs() < T::one() {
            streak += 1;
            if streak >= SERIES_STREAK {
                return Ok(sum);
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "gauss_2f1 series",
        detail: format!("{} terms at a = {}, b = {}, c = {}, x = {}", SERIES_MAX_TERMS, a, b, c, x),
    })
}
