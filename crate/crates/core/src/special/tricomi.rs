//! Tricomi's confluent hypergeometric function `Psi(a, c; u)` (Kummer `U`).
//!
//! Two evaluation routes:
//!
//! - the connection formula through two Kummer series, usable when `c` is
//!   not an integer;
//! - the Laplace-type integral
//!   `Gamma(a) Psi(a, c; u) = int_0^inf e^(-a t) exp(-u / (e^t - 1)) (1 - e^(-t))^(-c) dt`,
//!   valid for `Re(a) > 0`, `u > 0` and any real `c`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex;

use super::hypergeometric::{kummer_m, SERIES_MAX_TERMS, SERIES_STREAK};
use crate::error::{Error, Result};
use crate::numerics::{
    gamma, gamma_dd, integrate_adaptive_points, integrate_semi_infinite_points, near_integer, recip_gamma, recip_gamma_dd, DoubleDouble, Envelope,
    QuadratureConfig, Real,
};

/// `|c - round(c)|` below which the series route is refused.
pub const INTEGER_C_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsiEvalMode {
    SeriesCombination,
    IntegralRepresentation,
    /// Integral when `c` is within [`INTEGER_C_GUARD`] of an integer, series otherwise.
    #[default]
    Auto,
}

impl PsiEvalMode {
    fn name(self) -> &'static str {
        match self {
            PsiEvalMode::SeriesCombination => "series_combination",
            PsiEvalMode::IntegralRepresentation => "integral_representation",
            PsiEvalMode::Auto => "auto",
        }
    }
}

/// Real part of the log-integrand and its location of maximum.
fn log_integrand<T: Real>(re_a: T, c: T, u: T, t: T) -> T {
    let em1 = t.exp_m1();
    // ln(1 - e^-t), accurate at both ends
    let log_one_minus = if t < T::lit(0.693) {
        (-(-t).exp_m1()).ln()
    } else {
        (-(-t).exp()).ln_1p()
    };
    -re_a * t - u / em1 - c * log_one_minus
}

/// Peak of `t -> log_integrand(t)` found by bisection on the sign of the
/// derivative in `ln t`. The derivative is `+inf` at `0+` and tends to
/// `-Re(a)` at infinity.
fn integrand_peak<T: Real>(re_a: T, c: T, u: T) -> T {
    let slope = |t: T| {
        let em1 = t.exp_m1();
        -re_a + u * t.exp() / (em1 * em1) - c / em1
    };
    let mut lo = T::lit(-700.0);
    let mut hi = T::lit(7.0);
    if slope(hi.exp()) > T::zero() {
        return hi.exp();
    }
    if slope(lo.exp()) < T::zero() {
        return lo.exp();
    }
    for _ in 0..80 {
        let mid = (lo + hi) * T::lit(0.5);
        if slope(mid.exp()) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ((lo + hi) * T::lit(0.5)).exp()
}

/// `Gamma(a) Psi(a, c; u)` from the Laplace-type integral, without dividing
/// by `Gamma(a)` (which may overflow where the product does not).
pub fn gamma_psi_product<T: Real>(a: Complex<T>, c: T, u: T, cfg: &QuadratureConfig<T>) -> Result<Complex<T>> {
    if !(a.re > T::zero()) || !a.im.is_finite() {
        return Err(Error::Precondition {
            function: "gamma_psi_product",
            detail: format!("need Re(a) > 0, got a = {}", a),
        });
    }
    if !(u > T::zero()) || !u.is_finite() || !c.is_finite() {
        return Err(Error::Precondition {
            function: "gamma_psi_product",
            detail: format!("need u > 0 and finite c, got u = {}, c = {}", u, c),
        });
    }
    let integrand = |t: T| {
        let log_mod = log_integrand(a.re, c, u, t);
        Complex::from_polar(log_mod.exp(), -a.im * t)
    };

    let peak = integrand_peak(a.re, c, u);
    let mut ladder = Vec::new();
    for k in -8..=3 {
        let t = peak * T::lit(2f64.powi(k));
        if t > T::zero() && t.is_finite() {
            ladder.push(t);
        }
    }

    let one = T::one();
    let mut head_points = vec![T::zero()];
    head_points.extend(ladder.iter().copied().filter(|&t| t < one));
    head_points.push(one);
    let head = integrate_adaptive_points(integrand, &head_points, cfg)?;

    let tail_cfg = if a.im != T::zero() {
        cfg.with_period(Some(T::TAU() / a.im.abs()))
    } else {
        cfg.with_period(None)
    };
    let shifted: Vec<T> = ladder.iter().filter(|&&t| t > one).map(|&t| t - one).collect();
    let tail = integrate_semi_infinite_points(
        |s: T| integrand(one + s),
        &tail_cfg,
        Envelope::exponential(a.re),
        &shifted,
    )?;

    let value = head.value + tail.value;
    let error = head.error_estimate + tail.error_estimate;
    if !(head.converged && tail.converged) || !(error <= cfg.tolerance(value.norm()) * T::lit(2.0)) {
        return Err(Error::NonConvergence {
            what: "gamma_psi_product quadrature",
            detail: format!(
                "a = {}, c = {}, u = {}: value {} with error estimate {:e}",
                a,
                c,
                u,
                value,
                error.as_f64()
            ),
        });
    }
    Ok(value)
}

/// `Psi(a, c; u)` through the two-series connection formula
/// `Gamma(1-c)/Gamma(a-c+1) M(a, c; u) + Gamma(c-1)/Gamma(a) u^(1-c) M(a-c+1, 2-c; u)`.
///
/// Both terms grow like `e^u` while their sum decays like `u^(-a)`, so the
/// result loses roughly `log10(e^u u^(2 Re a - c))` digits to cancellation.
/// Real `a` is therefore summed in double-double arithmetic; complex `a`
/// stays in working precision.
pub fn psi_series<T: Real>(a: Complex<T>, c: T, u: T) -> Result<Complex<T>> {
    if near_integer(c, T::lit(INTEGER_C_GUARD)) {
        return Err(Error::ModeMismatch {
            mode: PsiEvalMode::SeriesCombination.name(),
            detail: format!("c = {} is within {:e} of an integer", c, INTEGER_C_GUARD),
        });
    }
    if !(u > T::zero()) {
        return Err(Error::Precondition {
            function: "tricomi_psi",
            detail: format!("need u > 0, got {}", u),
        });
    }
    if a.im == T::zero() {
        return psi_series_real(a.re.as_f64(), c.as_f64(), u.as_f64()).map(|v| Complex::new(T::lit(v), T::zero()));
    }
    let one = Complex::new(T::one(), T::zero());
    let cc = Complex::new(c, T::zero());
    let first = gamma(one - cc)? * recip_gamma(a - cc + one)? * kummer_m(a, cc, u)?;
    let second_coeff = gamma(cc - one)? * recip_gamma(a)?;
    let second = if second_coeff == Complex::new(T::zero(), T::zero()) {
        second_coeff
    } else {
        second_coeff * u.powf(T::one() - c) * kummer_m(a - cc + one, one + one - cc, u)?
    };
    Ok(first + second)
}

/// `M(a, c; u)` summed in double-double arithmetic.
fn kummer_m_dd(a: DoubleDouble, c: DoubleDouble, u: f64) -> Result<DoubleDouble> {
    let stop = 1e-33;
    let mut term = DoubleDouble::ONE;
    let mut sum = term;
    let mut streak = 0;
    for j in 0..SERIES_MAX_TERMS {
        let jf = j as f64;
        let ratio = (a + jf) * u / ((c + jf) * (jf + 1.0));
        term = term * ratio;
        sum = sum + term;
        if term.hi == 0.0 {
            return Ok(sum);
        }
        if term.abs().hi <= stop * sum.abs().hi && ratio.abs().hi < 1.0 {
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
        detail: format!("{} terms at a = {}, c = {}, x = {}", SERIES_MAX_TERMS, a.to_f64(), c.to_f64(), u),
    })
}

/// The connection formula for real parameters, carried out in double-double
/// arithmetic. The two terms can cancel to one part in `10^18` for moderate
/// `u` and `a`; the extra sixteen digits absorb that.
fn psi_series_real(a: f64, c: f64, u: f64) -> Result<f64> {
    if !(u <= 700.0) {
        return Err(Error::Domain {
            function: "tricomi_psi",
            detail: format!("u = {} exceeds the series overflow guard 700", u),
        });
    }
    let a = DoubleDouble::new(a);
    let c = DoubleDouble::new(c);
    let one = DoubleDouble::ONE;
    let first = gamma_dd(one - c)? * recip_gamma_dd(a - c + one)? * kummer_m_dd(a, c, u)?;
    let second_coeff = gamma_dd(c - one)? * recip_gamma_dd(a)?;
    let second = if second_coeff.hi == 0.0 {
        second_coeff
    } else {
        let power = ((one - c) * DoubleDouble::new(u).ln()).exp();
        second_coeff * power * kummer_m_dd(a - c + one, one + one - c, u)?
    };
    let value = (first + second).to_f64();
    if !value.is_finite() {
        return Err(Error::Overflow {
            function: "tricomi_psi",
            at: format!("a = {}, c = {}, u = {}", a.to_f64(), c.to_f64(), u),
        });
    }
    Ok(value)
}

/// Tricomi's `Psi(a, c; u)` for `u > 0`.
pub fn tricomi_psi<T: Real>(
    a: Complex<T>,
    c: T,
    u: T,
    mode: PsiEvalMode,
    cfg: &QuadratureConfig<T>,
) -> Result<Complex<T>> {
    let integral = |a: Complex<T>| -> Result<Complex<T>> {
        if !(a.re > T::zero()) {
            return Err(Error::ModeMismatch {
                mode: PsiEvalMode::IntegralRepresentation.name(),
                detail: format!("needs Re(a) > 0, got a = {}", a),
            });
        }
        Ok(gamma_psi_product(a, c, u, cfg)? * recip_gamma(a)?)
    };
    match mode {
        PsiEvalMode::SeriesCombination => psi_series(a, c, u),
        PsiEvalMode::IntegralRepresentation => integral(a),
        PsiEvalMode::Auto => {
            if near_integer(c, T::lit(INTEGER_C_GUARD)) {
                integral(a)
            } else {
                psi_series(a, c, u)
            }
        }
    }
}

/// Memo of `Gamma(a) Psi(a, c; u)` values keyed on the bit patterns of the
/// parameters with `u` rounded to 1e-14. Meant to live inside a single
/// evaluation (one kernel query); not shared across threads.
#[derive(Debug, Default)]
pub struct PsiCache {
    entries: RefCell<HashMap<[u64; 4], Complex<f64>>>,
    hits: RefCell<usize>,
}

impl PsiCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn gamma_psi_product(&self, a: Complex<f64>, c: f64, u: f64, cfg: &QuadratureConfig<f64>) -> Result<Complex<f64>> {
        let key = [a.re.to_bits(), a.im.to_bits(), c.to_bits(), ((u * 1e14).round()).to_bits()];
        if let Some(v) = self.entries.borrow().get(&key) {
            *self.hits.borrow_mut() += 1;
            return Ok(*v);
        }
        let v = gamma_psi_product(a, c, u, cfg)?;
        self.entries.borrow_mut().insert(key, v);
        Ok(v)
    }

    pub fn hits(&self) -> usize {
        *self.hits.borrow()
    }

    pub fn len(&self) -> usize {
        self.entries.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.borrow().is_empty()
    }
}
