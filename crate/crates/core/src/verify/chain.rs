//! Checks of the closed-form identities that link the integral
//! representation to Folland's constant.

use std::f64::consts::{FRAC_PI_2, PI};

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::numerics::{
    gamma_real, integrate_adaptive, integrate_adaptive_with, integrate_semi_infinite_envelope, EndpointSingularity,
    Envelope,
};
use crate::special::legendre_p;
use crate::QuadConfig;

pub const LAPLACE_COSINE_TOL: f64 = 1e-8;
pub const T_INTEGRAL_TOL: f64 = 1e-7;
pub const ARC_IDENTITY_TOL: f64 = 1e-13;
pub const COS_POWER_TOL: f64 = 1e-7;
pub const GEGENBAUER_TOL: f64 = 1e-10;
pub const DUPLICATION_TOL: f64 = 1e-12;

fn precondition(function: &'static str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition {
            function,
            detail: detail(),
        })
    }
}

fn converged(what: &'static str, r: &crate::RealQuad) -> Result<f64> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::NonConvergence {
            what,
            detail: format!("error estimate {:e} for value {:e}", r.error_estimate, r.value),
        })
    }
}

/// `int_0^inf x^(nu-1) e^(-alpha x) cos(theta x) dx = Gamma(nu) (alpha^2 + theta^2)^(-nu/2) cos(nu atan(theta/alpha))`.
pub fn check_laplace_cosine(nu: f64, alpha: f64, theta: f64, cfg: &QuadConfig) -> Result<VerificationReport> {
    precondition("check_laplace_cosine", nu > 0.0 && alpha > 0.0 && theta.is_finite(), || {
        format!("need nu > 0, alpha > 0, finite theta; got nu = {}, alpha = {}, theta = {}", nu, alpha, theta)
    })?;
    // Head [0, x0] with x = t^(1/nu), which absorbs x^(nu-1); tail by the
    // semi-infinite engine.
    let x0 = 1.0 / alpha;
    let head = integrate_adaptive(
        |t: f64| {
            let x = t.powf(1.0 / nu);
            (-alpha * x).exp() * (theta * x).cos() / nu
        },
        0.0,
        x0.powf(nu),
        cfg,
    )?;
    let period = (theta != 0.0).then(|| 2.0 * PI / theta.abs());
    let tail = integrate_semi_infinite_envelope(
        |s: f64| {
            let x = x0 + s;
            x.powf(nu - 1.0) * (-alpha * x).exp() * (theta * x).cos()
        },
        &cfg.with_period(period),
        Envelope::exponential(alpha).with_power((nu - 1.0).max(0.0)),
    )?;
    let lhs = converged("Laplace-cosine head", &head)? + converged("Laplace-cosine tail", &tail)?;
    let rhs = gamma_real(nu)? * (alpha * alpha + theta * theta).powf(-0.5 * nu) * (nu * theta.atan2(alpha)).cos();
    VerificationReport::real(
        "laplace_cosine",
        &[("nu", nu), ("alpha", alpha), ("theta", theta)],
        lhs,
        rhs,
        LAPLACE_COSINE_TOL,
    )
}

/// `(2^n Gamma(n) / pi^(n+1/2)) int_0^inf e^(-nt/2) (1 - e^-t)^-n (A^2 + theta^2)^(-n/2) cos(n atan(theta/A)) dt`
/// with `A = (mu/2) coth(t/2)`, against `(2^(n-1) Gamma(n/2)^2 / pi^(n+1/2)) (mu^2/4 + theta^2)^(-n/2)`.
pub fn check_t_integral_form(n: usize, mu: f64, theta: f64, cfg: &QuadConfig) -> Result<VerificationReport> {
    precondition("check_t_integral_form", n >= 1 && mu > 0.0 && theta.is_finite(), || {
        format!("need n >= 1, mu > 0; got n = {}, mu = {}", n, mu)
    })?;
    let nf = n as f64;
    let h = 0.5 * mu;
    // (1 - e^-t) A = (mu/2)(1 + e^-t) keeps the t -> 0 end regular.
    let f = |t: f64| {
        let e = (-t).exp();
        let m = -(-t).exp_m1();
        let a = h * (1.0 + e);
        let b = theta * m;
        (-0.5 * nf * t).exp() * (a * a + b * b).powf(-0.5 * nf) * (nf * b.atan2(a)).cos()
    };
    let r = integrate_semi_infinite_envelope(f, cfg, Envelope::exponential(0.5 * nf))?;
    let integral = converged("t-integral", &r)?;
    let lhs = 2f64.powi(n as i32) * gamma_real(nf)? / PI.powf(nf + 0.5) * integral;
    let g = gamma_real(0.5 * nf)?;
    let rhs = 2f64.powi(n as i32 - 1) * g * g / PI.powf(nf + 0.5) * (h * h + theta * theta).powf(-0.5 * nf);
    VerificationReport::real(
        "t_integral_form",
        &[("n", nf), ("mu", mu), ("theta", theta)],
        lhs,
        rhs,
        T_INTEGRAL_TOL,
    )
}

/// `arccos((1 - beta)/(1 + beta)) = 2 arctan(sqrt(beta))`.
///
/// For small `beta` the left side is ill-conditioned: the rounding of the
/// ratio is amplified by `1/sqrt(2 beta)`, about `1.6e-13` absolute at
/// `beta = 1e-8`.
pub fn check_arc_identity(beta: f64) -> Result<VerificationReport> {
    precondition("check_arc_identity", beta > 0.0 && beta.is_finite(), || {
        format!("need beta > 0, got {}", beta)
    })?;
    let lhs = ((1.0 - beta) / (1.0 + beta)).acos();
    let rhs = 2.0 * beta.sqrt().atan();
    VerificationReport::real("arc_identity", &[("beta", beta)], lhs, rhs, ARC_IDENTITY_TOL)
}

/// `int_0^eps (cos x - cos eps)^(nu - 1/2) cos(a x) dx = sqrt(pi/2) sin(eps)^nu Gamma(nu + 1/2) P_(a-1/2)^(-nu)(cos eps)`.
pub fn check_cos_power_legendre(nu: f64, a: f64, eps: f64, cfg: &QuadConfig) -> Result<VerificationReport> {
    precondition("check_cos_power_legendre", nu > -0.5 && a > 0.0 && eps > 0.0 && eps < PI, || {
        format!("need nu > -1/2, a > 0, 0 < eps < pi; got nu = {}, a = {}, eps = {}", nu, a, eps)
    })?;
    let power = nu - 0.5;
    // cos x - cos eps = 2 sin((eps + x)/2) sin((eps - x)/2), with d = eps - x
    let gap = |d: f64| 2.0 * (eps - 0.5 * d).sin() * (0.5 * d).sin();
    let r = if nu < 0.5 {
        // s = (eps - x)^(nu + 1/2) turns the endpoint factor into a constant;
        // at nu = 0 this is u = sqrt(eps - x).
        let k = nu + 0.5;
        let f = |s: f64| {
            if s == 0.0 {
                // limit of (gap(d)/d)^(nu - 1/2) / k as d -> 0
                return eps.sin().powf(power) * (a * eps).cos() / k;
            }
            let d = s.powf(1.0 / k);
            (gap(d) / d).powf(power) * (a * (eps - d)).cos() / k
        };
        integrate_adaptive_with(f, 0.0, eps.powf(k), cfg, EndpointSingularity::None)?
    } else {
        integrate_adaptive(|x: f64| gap(eps - x).powf(power) * (a * x).cos(), 0.0, eps, cfg)?
    };
    let lhs = converged("cosine-power integral", &r)?;
    let rhs = FRAC_PI_2.sqrt() * eps.sin().powf(nu) * gamma_real(nu + 0.5)? * legendre_p(a - 0.5, -nu, eps.cos())?;
    VerificationReport::real(
        "cos_power_legendre",
        &[("nu", nu), ("a", a), ("eps", eps)],
        lhs,
        rhs,
        COS_POWER_TOL,
    )
}

/// `P_sigma^(-sigma)(cos eps) = (sin(eps)/2)^sigma / Gamma(1 + sigma)`.
pub fn check_gegenbauer(sigma: f64, eps: f64) -> Result<VerificationReport> {
    precondition("check_gegenbauer", sigma > 0.0 && eps > 0.0 && eps < PI, || {
        format!("need sigma > 0, 0 < eps < pi; got sigma = {}, eps = {}", sigma, eps)
    })?;
    let lhs = legendre_p(sigma, -sigma, eps.cos())?;
    let rhs = (0.5 * eps.sin()).powf(sigma) / gamma_real(1.0 + sigma)?;
    VerificationReport::real("gegenbauer", &[("sigma", sigma), ("eps", eps)], lhs, rhs, GEGENBAUER_TOL)
}

/// `Gamma(xi) Gamma(xi + 1/2) = 2^(1 - 2 xi) sqrt(pi) Gamma(2 xi)`.
pub fn check_duplication(xi: f64) -> Result<VerificationReport> {
    precondition("check_duplication", xi > 0.0 && xi.is_finite(), || format!("need xi > 0, got {}", xi))?;
    let lhs = gamma_real(xi)? * gamma_real(xi + 0.5)?;
    let rhs = 2f64.powf(1.0 - 2.0 * xi) * PI.sqrt() * gamma_real(2.0 * xi)?;
    VerificationReport::real("duplication", &[("xi", xi)], lhs, rhs, DUPLICATION_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> QuadConfig {
        QuadConfig::default().with_rel_tol(1e-12).with_abs_tol(1e-14)
    }

    #[test]
    fn laplace_cosine_examples() {
        let r = check_laplace_cosine(1.0, 1.0, 0.0, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r);
        assert_relative_eq!(r.rhs.re, 1.0, max_relative = 1e-15);
        let r = check_laplace_cosine(1.0, 1.0, 1.0, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r);
        assert_relative_eq!(r.rhs.re, 0.5, max_relative = 1e-15);
        let r = check_laplace_cosine(2.0, 1.0, 1.0, &cfg()).unwrap();
        assert!(r.pass && r.rhs.re.abs() < 1e-15, "{:?}", r);
        // singular head
        assert!(check_laplace_cosine(0.3, 2.0, -3.0, &cfg()).unwrap().pass);
        assert!(check_laplace_cosine(0.0, 1.0, 0.0, &cfg()).is_err());
    }

    #[test]
    fn t_integral_examples() {
        let r = check_t_integral_form(1, 2.0, 0.0, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r);
        assert_relative_eq!(r.rhs.re, 0.564_189_583_547_756_3, max_relative = 1e-14);
        let r = check_t_integral_form(2, 2.0, 1.0, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r);
        assert_relative_eq!(r.rhs.re, PI.powf(-2.5), max_relative = 1e-14);
        let r = check_t_integral_form(1, 4.0, -1.0, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r);
        assert_relative_eq!(r.rhs.re, 0.252_313_252_202_016_1, max_relative = 1e-12);
    }

    #[test]
    fn arc_identity_examples() {
        let r = check_arc_identity(1.0).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.rhs.re, FRAC_PI_2, max_relative = 1e-15);
        let r = check_arc_identity(3.0).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.rhs.re, 2.0 * PI / 3.0, max_relative = 1e-15);
        // the conditioning of arccos near 1 leaves about 1.6e-13 here
        let r = check_arc_identity(1e-8).unwrap();
        assert!(r.abs_residual < 1e-12 && r.rhs.re < 3e-4);
        assert!(check_arc_identity(0.0).is_err());
    }

    #[test]
    fn cos_power_examples() {
        let r = check_cos_power_legendre(0.5, 1.0, FRAC_PI_2, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r);
        assert_relative_eq!(r.lhs.re, 1.0, max_relative = 1e-12);
        let r = check_cos_power_legendre(0.5, 2.0, PI / 3.0, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r);
        assert_relative_eq!(r.lhs.re, 3f64.sqrt() / 4.0, max_relative = 1e-12);
        let r = check_cos_power_legendre(0.5, 2.0, 1e-3, &cfg()).unwrap();
        assert!(r.pass && r.lhs.re.abs() < 1e-3 * 1.01, "{:?}", r);
        // endpoint substitution branch, including negative nu
        for nu in [0.0, -0.3, 0.25] {
            let r = check_cos_power_legendre(nu, 1.5, 1.0, &cfg()).unwrap();
            assert!(r.pass, "{:?}", r);
        }
    }

    #[test]
    fn gegenbauer_examples() {
        let r = check_gegenbauer(1e-8, 1.0).unwrap();
        assert!(r.pass && (r.rhs.re - 1.0).abs() < 1e-7);
        let r = check_gegenbauer(0.5, FRAC_PI_2).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.rhs.re, 0.797_884_560_802_865_4, max_relative = 1e-14);
        let r = check_gegenbauer(2.0, FRAC_PI_2).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.rhs.re, 0.125, max_relative = 1e-14);
    }

    #[test]
    fn duplication_examples() {
        let r = check_duplication(0.5).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.rhs.re, PI.sqrt(), max_relative = 1e-14);
        let r = check_duplication(1.0).unwrap();
        assert_relative_eq!(r.lhs.re, 0.5 * PI.sqrt(), max_relative = 1e-14);
        for n in 1..=8 {
            assert!(check_duplication(0.5 * n as f64).unwrap().pass);
        }
    }
}
