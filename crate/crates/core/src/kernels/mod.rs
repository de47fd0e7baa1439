//! Kernel evaluators: Folland's closed form, its Tricomi-Psi integral
//! representation, the Green kernel `R_0` (integral and closed form) and the
//! resolvent kernel `R(zeta)`.
//!
//! Everything here is double precision; the accuracy targets are stated for
//! `f64`.

use std::f64::consts::PI;

use log::debug;

use crate::error::{Error, Result};
use crate::heisenberg::{koranyi_gauge4, pair_geometry, HeisenbergPoint};
use crate::numerics::{gamma_real, integrate_semi_infinite_envelope, integrate_semi_infinite_points, Envelope, QuadratureConfig};
use crate::special::{PsiCache, ValidatedFastPath};
use crate::{Complex, ComplexQuad, QuadConfig, RealQuad};

type Point = HeisenbergPoint<f64>;

/// Largest `|theta| / |z - w|^2` the oscillatory evaluators accept.
pub const RESOLUTION_LIMIT: f64 = 1e4;

/// How the inner function `e^(-u/2) Psi(n/2, n; u)` is obtained.
#[derive(Debug, Clone, Copy, Default)]
pub enum PsiRoute<'a> {
    /// Laplace-type integral at every outer node, memoized per evaluation.
    #[default]
    Nested,
    /// Bessel closed form, valid only with a token validated for `a = n/2`.
    Fast(&'a ValidatedFastPath),
}

/// A kernel evaluation request.
#[derive(Debug, Clone)]
pub struct KernelQuery {
    pub n: usize,
    pub p: Point,
    /// Source point; the identity when absent.
    pub q: Option<Point>,
    /// Spectral parameter with `Re(zeta) < 0`; resolvent only.
    pub zeta: Option<Complex>,
    pub cfg: QuadConfig,
}

impl KernelQuery {
    pub fn new(n: usize, p: Point) -> Self {
        Self {
            n,
            p,
            q: None,
            zeta: None,
            cfg: QuadratureConfig::default(),
        }
    }

    pub fn with_source(mut self, q: Point) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_zeta(mut self, zeta: Complex) -> Self {
        self.zeta = Some(zeta);
        self
    }

    pub fn with_cfg(mut self, cfg: QuadConfig) -> Self {
        self.cfg = cfg;
        self
    }

    fn source(&self) -> Point {
        self.q.clone().unwrap_or_else(|| HeisenbergPoint::identity(self.n))
    }

    fn validate(&self) -> Result<()> {
        check_dim(self.n, &self.p)?;
        if let Some(q) = &self.q {
            check_dim(self.n, q)?;
        }
        if let Some(zeta) = self.zeta {
            if !(zeta.re < 0.0) || !zeta.im.is_finite() {
                return Err(Error::Precondition {
                    function: "resolvent",
                    detail: format!("need Re(zeta) < 0, got zeta = {}", zeta),
                });
            }
        }
        self.cfg.validate()
    }
}

fn check_dim(n: usize, p: &Point) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition {
            function: "kernels",
            detail: "dimension n must be at least 1".into(),
        });
    }
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: p.dim(),
        });
    }
    Ok(())
}

fn half_gamma(n: usize) -> f64 {
    // n >= 1 keeps n/2 away from the poles
    gamma_real(0.5 * n as f64).expect("gamma at a positive half-integer")
}

/// `c_n = 2^n Gamma(n/2)^2 / pi^(n+1)`.
pub fn folland_constant(n: usize) -> f64 {
    let g = half_gamma(n);
    2f64.powi(n as i32) * g * g / PI.powi(n as i32 + 1)
}

/// `c_n (|z|^4 + tau^2)^(-n/2)`.
pub fn folland_closed(p: &Point, n: usize) -> Result<f64> {
    check_dim(n, p)?;
    if p.is_identity() {
        return Err(Error::Singularity {
            function: "folland_closed",
        });
    }
    Ok(folland_constant(n) * koranyi_gauge4(p).powf(-0.5 * n as f64))
}

/// `2^(n-1) Gamma(n/2)^2 / pi^(n+1/2) ((mu/2)^2 + theta^2)^(-n/2)`.
pub fn green_r0_closed(p: &Point, q: &Point, n: usize) -> Result<f64> {
    check_dim(n, p)?;
    check_dim(n, q)?;
    let geo = pair_geometry(p, q)?;
    let r2 = 0.5 * geo.mu;
    let gauge4 = r2 * r2 + geo.theta * geo.theta;
    if gauge4 == 0.0 {
        return Err(Error::Singularity {
            function: "green_r0_closed",
        });
    }
    let g = half_gamma(n);
    let prefactor = 2f64.powi(n as i32 - 1) * g * g / PI.powf(n as f64 + 0.5);
    Ok(prefactor * gauge4.powf(-0.5 * n as f64))
}

/// Outer configuration: the decay/period hints for `x^(n-1) e^(-x r2) ... cos(theta x)`.
fn outer_setup(r2: f64, theta: f64, n: usize, cfg: &QuadConfig) -> Result<(QuadConfig, Envelope<f64>)> {
    let ratio = theta.abs() / r2;
    if ratio > RESOLUTION_LIMIT {
        return Err(Error::ResolutionBudget {
            ratio,
            limit: RESOLUTION_LIMIT,
        });
    }
    let period = if theta != 0.0 { Some(2.0 * PI / theta.abs()) } else { None };
    Ok((
        cfg.with_period(period),
        Envelope::exponential(r2).with_power(0.5 * n as f64 - 1.0),
    ))
}

/// Tighter inner settings so quadrature noise in the inner function stays
/// well below the outer tolerance.
fn inner_config(cfg: &QuadConfig) -> QuadConfig {
    let mut inner = cfg.with_rel_tol((cfg.rel_tol * 1e-2).max(1e-14)).with_abs_tol(1e-30).with_period(None);
    inner.tail_epsilon = 1e-30;
    inner
}

/// `int_0^inf x^(n-1) e^(-x r2) Psi(n/2, n; 2 x r2) cos(theta x) dx`.
fn tricomi_cosine_integral(n: usize, r2: f64, theta: f64, cfg: &QuadConfig, route: PsiRoute) -> Result<RealQuad> {
    let a = 0.5 * n as f64;
    let (outer, envelope) = outer_setup(r2, theta, n, cfg)?;
    let power = n as i32 - 1;
    let result = match route {
        PsiRoute::Fast(fast) => {
            if fast.a() != a {
                return Err(Error::Precondition {
                    function: "tricomi_cosine_integral",
                    detail: format!("fast path validated for a = {}, need a = {}", fast.a(), a),
                });
            }
            integrate_semi_infinite_envelope(
                |x: f64| {
                    if x == 0.0 {
                        return if n == 1 { f64::NAN } else { limit_at_zero(n, r2) };
                    }
                    let u = 2.0 * x * r2;
                    fast.damped_psi(u).map_or(f64::NAN, |v| x.powi(power) * v * (theta * x).cos())
                },
                &outer,
                envelope,
            )?
        }
        PsiRoute::Nested => {
            let inner = inner_config(cfg);
            let cache = PsiCache::new();
            let gamma_a = half_gamma(n);
            let failure = std::cell::RefCell::new(None);
            let result = integrate_semi_infinite_envelope(
                |x: f64| {
                    if x == 0.0 {
                        return if n == 1 { f64::NAN } else { limit_at_zero(n, r2) };
                    }
                    let u = 2.0 * x * r2;
                    match cache.gamma_psi_product(Complex::new(a, 0.0), n as f64, u, &inner) {
                        Ok(v) => x.powi(power) * (-0.5 * u).exp() * v.re / gamma_a * (theta * x).cos(),
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e.context(format!("inner integral at x = {}", x)));
                            f64::NAN
                        }
                    }
                },
                &outer,
                envelope,
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            debug!("nested Psi evaluations: {} cached, {} hits", cache.len(), cache.hits());
            result?
        }
    };
    Ok(result)
}

/// Value of `x^(n-1) e^(-x r2) Psi(n/2, n; 2 x r2)` at `x = 0` for `n >= 2`:
/// `Gamma(n-1) / Gamma(n/2) (2 r2)^(1-n)`.
fn limit_at_zero(n: usize, r2: f64) -> f64 {
    let g = gamma_real(n as f64 - 1.0).expect("gamma at a positive integer");
    g / half_gamma(n) * (2.0 * r2).powi(1 - n as i32)
}

/// The integral representation of Folland's solution with the default
/// (nested) inner route.
pub fn folland_integral(p: &Point, n: usize, cfg: &QuadConfig) -> Result<RealQuad> {
    folland_integral_with(p, n, cfg, PsiRoute::Nested)
}

/// `2^(n+1) Gamma(n/2) / pi^(n+1) int_0^inf x^(n-1) e^(-x|z|^2) Psi(n/2, n; 2x|z|^2) cos(tau x) dx`.
pub fn folland_integral_with(p: &Point, n: usize, cfg: &QuadConfig, route: PsiRoute) -> Result<RealQuad> {
    check_dim(n, p)?;
    let r2 = p.z_norm_sqr();
    if r2 == 0.0 {
        return Err(Error::UnsupportedRepresentation(
            "the integral representation degenerates at z = 0".into(),
        ));
    }
    let prefactor = 2f64.powi(n as i32 + 1) * half_gamma(n) / PI.powi(n as i32 + 1);
    let r = tricomi_cosine_integral(n, r2, p.tau, cfg, route)?;
    debug!("folland_integral n={} |z|^2={} tau={}: {} evaluations", n, r2, p.tau, r.evaluations);
    Ok(r.map(|v| prefactor * v))
}

/// Green kernel `R_0(p, q)` from its integral form, default inner route.
pub fn green_r0(p: &Point, q: &Point, n: usize, cfg: &QuadConfig) -> Result<RealQuad> {
    green_r0_with(p, q, n, cfg, PsiRoute::Nested)
}

/// `2^n Gamma(n/2) / pi^(n+1/2) int_0^inf x^(n-1) Psi(n/2, n; 2x|z-w|^2) e^(-x|z-w|^2) cos(x theta) dx`.
pub fn green_r0_with(p: &Point, q: &Point, n: usize, cfg: &QuadConfig, route: PsiRoute) -> Result<RealQuad> {
    check_dim(n, p)?;
    check_dim(n, q)?;
    let geo = pair_geometry(p, q)?;
    let r2 = 0.5 * geo.mu;
    if r2 == 0.0 {
        return Err(Error::UnsupportedRepresentation(
            "the integral representation degenerates at z = w".into(),
        ));
    }
    let prefactor = 2f64.powi(n as i32) * half_gamma(n) / PI.powf(n as f64 + 0.5);
    let r = tricomi_cosine_integral(n, r2, geo.theta, cfg, route)?;
    Ok(r.map(|v| prefactor * v))
}

/// Resolvent kernel
/// `R(zeta; p, q) = -2^n / pi^(n+1/2) int_0^inf x^(n-1) Gamma(a) Psi(a, n; 2x|z-w|^2) e^(-x|z-w|^2) cos(x theta) dx`
/// with `a = n/2 - zeta/(2x)`.
///
/// Accuracy is targeted for real `zeta < 0` and for `|Im zeta| <= |Re zeta|`.
pub fn resolvent(query: &KernelQuery) -> Result<ComplexQuad> {
    query.validate()?;
    let zeta = query.zeta.ok_or_else(|| Error::Precondition {
        function: "resolvent",
        detail: "zeta is required".into(),
    })?;
    let n = query.n;
    let q = query.source();
    let geo = pair_geometry(&query.p, &q)?;
    let r2 = 0.5 * geo.mu;
    if r2 == 0.0 {
        return Err(Error::UnsupportedRepresentation(
            "the resolvent integral degenerates at z = w".into(),
        ));
    }
    let (outer, envelope) = outer_setup(r2, geo.theta, n, &query.cfg)?;
    let inner = inner_config(&query.cfg);
    let cache = PsiCache::new();
    let c = n as f64;
    let power = n as i32 - 1;
    let failure = std::cell::RefCell::new(None);
    // The factor Gamma(a) (2 x r2)^(-a) climbs towards its limit only for
    // x >> |zeta|, so the envelope constant is also fitted further out.
    let far: Vec<f64> = [12.0, 16.0, 24.0, 32.0].iter().map(|s| s / r2).collect();
    let result = integrate_semi_infinite_points(
        |x: f64| {
            if x == 0.0 {
                // Gamma(a) Psi(a, n; u) ~ x^(1-n) near 0, so the integrand
                // has a finite limit; the quadrature nodes never sit on 0.
                return Complex::new(f64::NAN, 0.0);
            }
            let u = 2.0 * x * r2;
            let a = Complex::new(0.5 * c, 0.0) - zeta / (2.0 * x);
            match cache.gamma_psi_product(a, c, u, &inner) {
                Ok(v) => v * (x.powi(power) * (-0.5 * u).exp() * (geo.theta * x).cos()),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e.context(format!("resolvent inner integral at x = {}", x)));
                    Complex::new(f64::NAN, 0.0)
                }
            }
        },
        &outer,
        envelope,
        &far,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let result = result?;
    debug!(
        "resolvent n={} zeta={} mu={} theta={}: {} evaluations, {} cached inner values",
        n,
        zeta,
        geo.mu,
        geo.theta,
        result.evaluations,
        cache.len()
    );
    let prefactor = -(2f64.powi(n as i32)) / PI.powf(n as f64 + 0.5);
    Ok(result.map(|v| v * prefactor))
}

/// Fast-path token for dimension `n`, validated on the default grid.
pub fn validated_fast_path(n: usize, cfg: &QuadConfig) -> Result<ValidatedFastPath> {
    ValidatedFastPath::validate(0.5 * n as f64, &ValidatedFastPath::default_grid(), cfg)
}
