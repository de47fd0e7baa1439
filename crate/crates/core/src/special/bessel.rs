//! Scaled modified Bessel function `e^y K_nu(y)` and the Bessel form of
//! `Gamma(a) Psi(a, 2a; u)`.

use num_complex::Complex;

use super::tricomi::gamma_psi_product;
use crate::error::{Error, Result};
use crate::numerics::{gamma_real, QuadratureConfig, Real};

/// Relative agreement a [`ValidatedFastPath`] must reach against the
/// Laplace-type integral at every grid point.
pub const FAST_PATH_TOLERANCE: f64 = 1e-10;

/// `e^y K_nu(y)` for `y > 0`, from the trapezoid rule on
/// `int_0^inf exp(-2 y sinh^2(t/2)) cosh(nu t) dt`.
///
/// The integrand is entire and decays double exponentially, so the
/// trapezoid rule converges geometrically; the step shrinks like
/// `1/sqrt(y)` to keep the integrand resolved for large `y`.
pub fn bessel_k_scaled<T: Real>(nu: T, y: T) -> Result<T> {
    if !(y > T::zero()) || !y.is_finite() || !nu.is_finite() {
        return Err(Error::Domain {
            function: "bessel_k_scaled",
            detail: format!("need finite y > 0 and finite order, got y = {}, nu = {}", y, nu),
        });
    }
    let nu = nu.abs();
    let half = T::lit(0.5);
    let h = T::lit(0.25) / (y * T::lit(0.25)).sqrt().max(T::one());
    let peak = (nu / y).asinh();
    let log_term = |t: T| {
        let s = (t * half).sinh();
        -T::lit(2.0) * y * s * s
    };
    let term = |t: T| {
        let base = log_term(t);
        half * ((base + nu * t).exp() + (base - nu * t).exp())
    };
    let stop = T::lit(1e-18);
    let mut sum = half * term(T::zero());
    let mut k = 1usize;
    loop {
        let t = h * T::lit(k as f64);
        let f = term(t);
        sum = sum + f;
        if t > peak && f <= stop * sum {
            break;
        }
        k += 1;
        if k > 1_000_000 {
            return Err(Error::NonConvergence {
                what: "bessel_k_scaled trapezoid",
                detail: format!("nu = {}, y = {}", nu, y),
            });
        }
    }
    let value = h * sum;
    if !value.is_finite() {
        return Err(Error::Overflow {
            function: "bessel_k_scaled",
            at: format!("nu = {}, y = {}", nu, y),
        });
    }
    Ok(value)
}

/// `Gamma(a) Psi(a, 2a; u) = Gamma(a) u^(1/2 - a) e^(u/2) K_(a - 1/2)(u/2) / sqrt(pi)`.
///
/// Not exposed unvalidated; see [`ValidatedFastPath`].
fn gamma_psi_bessel<T: Real>(a: T, gamma_a: T, u: T) -> Result<T> {
    let half = T::lit(0.5);
    let k = bessel_k_scaled(a - half, u * half)?;
    Ok(gamma_a * u.powf(half - a) * k / T::PI().sqrt())
}

/// Closed-form evaluator of `Gamma(a) Psi(a, 2a; u)` for one real `a`,
/// obtainable only by agreeing with the integral representation to
/// [`FAST_PATH_TOLERANCE`] at every point of a validation grid.
#[derive(Debug, Clone)]
pub struct ValidatedFastPath {
    a: f64,
    gamma_a: f64,
    grid: (f64, f64),
    worst_deviation: f64,
}

impl ValidatedFastPath {
    /// Validates the Bessel form against the Laplace-type integral on `grid`.
    pub fn validate(a: f64, grid: &[f64], cfg: &QuadratureConfig<f64>) -> Result<Self> {
        if !(a > 0.0) || grid.is_empty() {
            return Err(Error::Precondition {
                function: "ValidatedFastPath::validate",
                detail: format!("need a > 0 and a non-empty grid, got a = {}, {} points", a, grid.len()),
            });
        }
        // The reference must be well inside the acceptance threshold, also
        // where the product is small in absolute terms.
        let cfg = cfg.with_rel_tol(cfg.rel_tol.min(1e-12)).with_abs_tol(cfg.abs_tol.min(1e-30));
        let cfg = &cfg;
        let gamma_a = gamma_real(a)?;
        let mut worst: f64 = 0.0;
        for &u in grid {
            let reference = gamma_psi_product(Complex::new(a, 0.0), 2.0 * a, u, cfg)
                .map_err(|e| e.context(format!("fast-path validation at a = {}, u = {}", a, u)))?
                .re;
            let fast = gamma_psi_bessel(a, gamma_a, u)?;
            let dev = ((fast - reference) / reference).abs();
            worst = worst.max(dev);
            if !(dev <= FAST_PATH_TOLERANCE) {
                return Err(Error::NonConvergence {
                    what: "fast-path validation",
                    detail: format!(
                        "a = {}, u = {}: Bessel form {:e} vs integral {:e} (relative deviation {:e})",
                        a, u, fast, reference, dev
                    ),
                });
            }
        }
        let lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            a,
            gamma_a,
            grid: (lo, hi),
            worst_deviation: worst,
        })
    }

    /// Log-spaced grid `10^-6 .. 10^4` used by the kernel evaluators.
    pub fn default_grid() -> Vec<f64> {
        (0..=40).map(|k| 10f64.powf(-6.0 + 0.25 * k as f64)).collect()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Range of `u` covered by the validation grid.
    pub fn grid_range(&self) -> (f64, f64) {
        self.grid
    }

    pub fn worst_deviation(&self) -> f64 {
        self.worst_deviation
    }

    /// `Gamma(a) Psi(a, 2a; u)`.
    pub fn gamma_psi_product(&self, u: f64) -> Result<f64> {
        gamma_psi_bessel(self.a, self.gamma_a, u)
    }

    /// `e^(-u/2) Psi(a, 2a; u)`, which stays finite-sized for large `u`.
    pub fn damped_psi(&self, u: f64) -> Result<f64> {
        let k = bessel_k_scaled(self.a - 0.5, 0.5 * u)?;
        Ok(u.powf(0.5 - self.a) * (-0.5 * u).exp() * k / std::f64::consts::PI.sqrt())
    }
}
