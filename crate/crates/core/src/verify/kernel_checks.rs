//! Checks of the kernel evaluators against the closed forms.

use std::f64::consts::PI;

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::heisenberg::multiply;
use crate::kernels::{folland_closed, folland_integral_with, green_r0_closed, green_r0_with, resolvent, KernelQuery, PsiRoute};
use crate::numerics::QuadratureResult;
use crate::{Complex, Point, QuadConfig};

/// Relative accuracy required of the integral representation.
pub const INTEGRAL_VS_CLOSED_TOL: f64 = 1e-6;
/// Bound on the last residual of a resolvent-limit sequence.
pub const RESOLVENT_LIMIT_TOL: f64 = 1e-3;
/// Agreement required between kernel values related by symmetry or
/// translation.
pub const INVARIANCE_TOL: f64 = 1e-9;

fn converged<V: Copy + std::fmt::Debug>(what: &'static str, r: QuadratureResult<V, f64>) -> Result<QuadratureResult<V, f64>> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NonConvergence {
            what,
            detail: format!("error estimate {:e} for value {:?}", r.error_estimate, r.value),
        })
    }
}

fn with_point(mut report: VerificationReport, prefix: &str, p: &Point) -> VerificationReport {
    for (j, z) in p.z.iter().enumerate() {
        report = report
            .with_parameter(&format!("{}_x{}", prefix, j + 1), z.re)
            .with_parameter(&format!("{}_y{}", prefix, j + 1), z.im);
    }
    report.with_parameter(&format!("{}_tau", prefix), p.tau)
}

/// Integral representation against the closed form (first report), and
/// `green_r0(p, 0) / folland_closed(p)` against `sqrt(pi)/2` (second).
///
/// Each tolerance is `max(1e-6, 10 * error_estimate / value)`. A quadrature
/// that stops at its roundoff floor without meeting `cfg` still reports;
/// its error estimate and `converged = 0` are recorded in the parameters.
pub fn check_integral_vs_closed(n: usize, p: &Point, cfg: &QuadConfig) -> Result<Vec<VerificationReport>> {
    check_integral_vs_closed_with(n, p, cfg, PsiRoute::Nested)
}

pub fn check_integral_vs_closed_with(
    n: usize,
    p: &Point,
    cfg: &QuadConfig,
    route: PsiRoute,
) -> Result<Vec<VerificationReport>> {
    if p.z_norm_sqr() == 0.0 {
        return Err(Error::Precondition {
            function: "check_integral_vs_closed",
            detail: "need |z| > 0".into(),
        });
    }
    let closed = folland_closed(p, n)?;
    let integral = folland_integral_with(p, n, cfg, route)?;
    let tol = INTEGRAL_VS_CLOSED_TOL.max(10.0 * integral.error_estimate / closed.abs());
    let main = VerificationReport::real("integral_vs_closed", &[("n", n as f64)], integral.value, closed, tol)?
        .with_parameter("error_estimate", integral.error_estimate)
        .with_parameter("converged", integral.converged as u8 as f64);

    let identity = Point::identity(n);
    let green = green_r0_with(p, &identity, n, cfg, route)?;
    let ratio_error = green.error_estimate / closed.abs();
    let tol = INTEGRAL_VS_CLOSED_TOL.max(10.0 * green.error_estimate / green.value.abs());
    let ratio = VerificationReport::real(
        "green_ratio",
        &[("n", n as f64)],
        green.value / closed,
        0.5 * PI.sqrt(),
        tol,
    )?
    .with_parameter("error_estimate", ratio_error)
    .with_parameter("converged", green.converged as u8 as f64);
    Ok(vec![with_point(main, "p", p), with_point(ratio, "p", p)])
}

/// `|-R(zeta_k; p, q) / R_0(p, q) - 1|` for `zeta_k = -10^-k`, `k = 1..=k_max`.
///
/// Row `k` is judged against the residual of row `k - 1` (the first row
/// against 1), so every row passes exactly when the sequence decreases; the
/// last row's tolerance is additionally capped at 1e-3.
pub fn check_resolvent_limit(n: usize, p: &Point, q: &Point, k_max: u32, cfg: &QuadConfig) -> Result<Vec<VerificationReport>> {
    if k_max < 2 {
        return Err(Error::Precondition {
            function: "check_resolvent_limit",
            detail: format!("need k_max >= 2, got {}", k_max),
        });
    }
    let r0 = green_r0_closed(p, q, n)?;
    let mut reports = Vec::with_capacity(k_max as usize);
    let mut previous = 1.0;
    for k in 1..=k_max {
        let zeta = -(10f64.powi(-(k as i32)));
        let query = KernelQuery::new(n, p.clone())
            .with_source(q.clone())
            .with_zeta(Complex::new(zeta, 0.0))
            .with_cfg(*cfg);
        let r = converged("resolvent", resolvent(&query).map_err(|e| e.context(format!("zeta = {}", zeta)))?)?;
        let tol = if k == k_max { f64::min(previous, RESOLVENT_LIMIT_TOL) } else { previous };
        let report = VerificationReport::new(
            "resolvent_limit",
            &[("n", n as f64), ("k", k as f64), ("zeta", zeta)],
            -r.value / r0,
            Complex::new(1.0, 0.0),
            tol,
        )?;
        previous = report.abs_residual;
        reports.push(with_point(with_point(report, "p", p), "q", q));
    }
    Ok(reports)
}

fn resolvent_value(n: usize, p: &Point, q: &Point, zeta: Complex, cfg: &QuadConfig) -> Result<Complex> {
    let query = KernelQuery::new(n, p.clone()).with_source(q.clone()).with_zeta(zeta).with_cfg(*cfg);
    Ok(converged("resolvent", resolvent(&query)?)?.value)
}

/// `R(zeta; p, q) = R(zeta; q, p)` (first report) and
/// `R(zeta; g p, g q) = R(zeta; p, q)` (second), both at 1e-9.
pub fn check_resolvent_symmetry(
    n: usize,
    p: &Point,
    q: &Point,
    g: &Point,
    zeta: Complex,
    cfg: &QuadConfig,
) -> Result<Vec<VerificationReport>> {
    let base = resolvent_value(n, p, q, zeta, cfg)?;
    let swapped = resolvent_value(n, q, p, zeta, cfg)?;
    let moved = resolvent_value(n, &multiply(g, p)?, &multiply(g, q)?, zeta, cfg)?;
    let params = [("n", n as f64), ("zeta_re", zeta.re), ("zeta_im", zeta.im)];
    let symmetry = VerificationReport::new("resolvent_symmetry", &params, swapped, base, INVARIANCE_TOL)?;
    let invariance = with_point(
        VerificationReport::new("resolvent_left_invariance", &params, moved, base, INVARIANCE_TOL)?,
        "g",
        g,
    );
    Ok(vec![
        with_point(with_point(symmetry, "p", p), "q", q),
        with_point(with_point(invariance, "p", p), "q", q),
    ])
}

/// Residuals of [`check_resolvent_limit`] for `(g p, g q)` against those for
/// `(p, q)`, row by row, at 1e-9.
pub fn check_resolvent_limit_translation(
    n: usize,
    p: &Point,
    q: &Point,
    g: &Point,
    k_max: u32,
    cfg: &QuadConfig,
) -> Result<Vec<VerificationReport>> {
    let base = check_resolvent_limit(n, p, q, k_max, cfg)?;
    let moved = check_resolvent_limit(n, &multiply(g, p)?, &multiply(g, q)?, k_max, cfg)?;
    base.iter()
        .zip(&moved)
        .map(|(b, m)| {
            let r = VerificationReport::real(
                "resolvent_limit_translation",
                &[("n", n as f64), ("k", b.parameter("k").unwrap_or(f64::NAN))],
                m.abs_residual,
                b.abs_residual,
                INVARIANCE_TOL,
            )?;
            Ok(with_point(with_point(with_point(r, "p", p), "q", q), "g", g))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn point(x: &[f64], tau: f64) -> Point {
        Point::from_real(x, &vec![0.0; x.len()], tau).unwrap()
    }

    #[test]
    fn integral_vs_closed_examples() {
        let cfg = QuadConfig::default();
        let rows = check_integral_vs_closed(1, &point(&[1.0], 0.0), &cfg).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{:?}", rows);
        assert_relative_eq!(rows[1].lhs.re, 0.886_226_925_452_758, max_relative = 1e-6);
        assert_eq!(rows[0].parameter("p_x1"), Some(1.0));
        for (n, tau) in [(2, 1.0), (3, 0.5)] {
            let mut x = vec![0.0; n];
            x[0] = 1.0;
            let rows = check_integral_vs_closed(n, &point(&x, tau), &cfg).unwrap();
            assert!(rows.iter().all(|r| r.pass && r.rel_residual <= 1e-6), "{:?}", rows);
        }
        assert!(check_integral_vs_closed(1, &point(&[0.0], 1.0), &cfg).is_err());
    }

    #[test]
    fn resolvent_limit_n2() {
        let p = point(&[1.0, 0.0], 1.0);
        let id = Point::identity(2);
        let cfg = QuadConfig::default();
        // The residual behaves like 1.8 |zeta|: three steps leave 1.84e-3,
        // above the 1e-3 cap, so that row is reported as failing.
        let rows = check_resolvent_limit(2, &p, &id, 3, &cfg).unwrap();
        assert!(rows[0].pass && rows[1].pass && !rows[2].pass, "{:?}", rows);
        assert_relative_eq!(rows[2].abs_residual, 1.839e-3, max_relative = 1e-2);
        let rows = check_resolvent_limit(2, &p, &id, 4, &cfg).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{:?}", rows);
        assert!(check_resolvent_limit(2, &p, &id, 1, &cfg).is_err());
    }

    #[test]
    fn symmetry_and_translation() {
        let cfg = QuadConfig::default();
        let p = Point::from_real(&[0.7], &[-0.2], 0.4).unwrap();
        let q = Point::from_real(&[-0.1], &[0.5], -0.3).unwrap();
        let g = Point::from_real(&[1.3], &[0.6], 2.0).unwrap();
        let rows = check_resolvent_symmetry(1, &p, &q, &g, Complex::new(-0.5, 0.2), &cfg).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{:?}", rows);
        let rows = check_resolvent_limit_translation(1, &p, &q, &g, 2, &cfg).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{:?}", rows);
    }
}
