//! Seeded suites of checks: the listed examples plus random draws inside
//! each check's preconditions, evaluated in parallel and reported in input
//! order.

use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::chain::*;
use super::distributional::{check_distributional, DISTRIBUTIONAL_TOL};
use super::kernel_checks::{check_integral_vs_closed, check_resolvent_limit, check_resolvent_limit_translation, check_resolvent_symmetry};
use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::heisenberg::{Gaussian, Polynomial, Product, TestFunction};
use crate::{Complex, Point, QuadConfig};

/// Random draws per check family.
pub const DRAWS: usize = 50;
/// Tolerance the arc identity is held to in the chain suite.
pub const CHAIN_ARC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Chain,
    Kernels,
    Distributional,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "chain" => Ok(Suite::Chain),
            "kernels" => Ok(Suite::Kernels),
            "distributional" => Ok(Suite::Distributional),
            other => Err(Error::InvalidConfig(format!("unknown suite '{}'", other))),
        }
    }
}

/// A named check producing one or more reports.
pub struct Case {
    pub label: String,
    /// Human-readable parameters, attached to errors.
    pub detail: String,
    run: Box<dyn Fn() -> Result<Vec<VerificationReport>> + Send + Sync>,
}

impl Case {
    pub fn new(
        label: impl Into<String>,
        detail: impl Into<String>,
        run: impl Fn() -> Result<Vec<VerificationReport>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            detail: detail.into(),
            run: Box::new(run),
        }
    }

    fn single(
        label: impl Into<String>,
        detail: impl Into<String>,
        run: impl Fn() -> Result<VerificationReport> + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, detail, move || run().map(|r| vec![r]))
    }

    pub fn run(&self) -> Result<Vec<VerificationReport>> {
        (self.run)()
    }
}

#[derive(Debug, Default)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    /// Checks that raised instead of reporting, with their labels and
    /// parameters.
    pub errors: Vec<(String, Error)>,
}

impl SuiteOutcome {
    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.reports.iter().filter(|r| !r.pass)
    }

    pub fn all_passed(&self) -> bool {
        self.errors.is_empty() && self.reports.iter().all(|r| r.pass)
    }

    /// `(identity_id, passed, total)` per identity, in first-seen order.
    pub fn summary(&self) -> Vec<(String, usize, usize)> {
        let mut rows: Vec<(String, usize, usize)> = Vec::new();
        for r in &self.reports {
            match rows.iter_mut().find(|(id, _, _)| *id == r.identity_id) {
                Some(row) => {
                    row.1 += r.pass as usize;
                    row.2 += 1;
                }
                None => rows.push((r.identity_id.clone(), r.pass as usize, 1)),
            }
        }
        rows
    }
}

/// Runs the cases in parallel; reports keep the order of `cases`.
pub fn run_cases(cases: &[Case]) -> SuiteOutcome {
    let results: Vec<Result<Vec<VerificationReport>>> = cases.par_iter().map(Case::run).collect();
    let mut outcome = SuiteOutcome::default();
    for (case, result) in cases.iter().zip(results) {
        match result {
            Ok(reports) => outcome.reports.extend(reports),
            Err(e) => outcome.errors.push((format!("{} ({})", case.label, case.detail), e)),
        }
    }
    outcome
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteOutcome {
    run_cases(&suite_cases(suite, seed))
}

pub fn suite_cases(suite: Suite, seed: u64) -> Vec<Case> {
    match suite {
        Suite::Chain => chain_cases(seed),
        Suite::Kernels => kernel_cases(seed),
        Suite::Distributional => distributional_cases(seed),
        Suite::All => {
            let mut cases = chain_cases(seed);
            cases.extend(kernel_cases(seed));
            cases.extend(distributional_cases(seed));
            cases
        }
    }
}

/// Independent stream per check family.
fn family_rng(seed: u64, family: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(family);
    rng
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn chain_config() -> QuadConfig {
    QuadConfig::default().with_rel_tol(1e-12).with_abs_tol(1e-14)
}

pub fn chain_cases(seed: u64) -> Vec<Case> {
    let cfg = chain_config();
    let mut cases = Vec::new();

    let mut laplace = vec![(1.0, 1.0, 0.0), (1.0, 1.0, 1.0), (2.0, 1.0, 1.0)];
    let mut rng = family_rng(seed, 1);
    laplace.extend((0..DRAWS).map(|_| (rng.gen_range(0.2..4.0), rng.gen_range(0.2..3.0), rng.gen_range(-5.0..5.0))));
    for (nu, alpha, theta) in laplace {
        cases.push(Case::single("laplace_cosine", format!("nu={}, alpha={}, theta={}", nu, alpha, theta), move || check_laplace_cosine(nu, alpha, theta, &cfg)));
    }

    let mut t_forms = vec![(1, 2.0, 0.0), (2, 2.0, 1.0), (1, 4.0, -1.0)];
    let mut rng = family_rng(seed, 2);
    for n in 1..=4 {
        t_forms.extend((0..20).map(|_| (n, log_uniform(&mut rng, 0.1, 10.0), rng.gen_range(-10.0..10.0))));
    }
    t_forms.extend((0..DRAWS).map(|_| (rng.gen_range(1..=4), log_uniform(&mut rng, 0.1, 10.0), rng.gen_range(-10.0..10.0))));
    for (n, mu, theta) in t_forms {
        cases.push(Case::single("t_integral_form", format!("n={}, mu={}, theta={}", n, mu, theta), move || check_t_integral_form(n, mu, theta, &cfg)));
    }

    // nu = n/2 - 1 for n = 2..6, as met in the derivation
    let mut cos_power = vec![(0.5, 1.0, FRAC_PI_2), (0.5, 2.0, PI / 3.0), (0.5, 2.0, 1e-3)];
    for nu in [0.0, 0.5, 1.0, 1.5, 2.0] {
        for (a, eps) in [(0.5, 0.3), (1.0, 1.0), (2.5, 2.0)] {
            cos_power.push((nu, a, eps));
        }
    }
    let mut rng = family_rng(seed, 3);
    cos_power.extend((0..DRAWS).map(|_| (rng.gen_range(-0.45..3.0), rng.gen_range(0.1..5.0), rng.gen_range(0.05..2.6))));
    for (nu, a, eps) in cos_power {
        cases.push(Case::single("cos_power_legendre", format!("nu={}, a={}, eps={}", nu, a, eps), move || check_cos_power_legendre(nu, a, eps, &cfg)));
    }

    let mut gegenbauer = vec![(1e-8, 1.0), (0.5, FRAC_PI_2), (2.0, FRAC_PI_2)];
    let mut rng = family_rng(seed, 4);
    gegenbauer.extend((0..DRAWS).map(|_| (rng.gen_range(0.01..5.0), rng.gen_range(0.05..3.0))));
    for (sigma, eps) in gegenbauer {
        cases.push(Case::single("gegenbauer", format!("sigma={}, eps={}", sigma, eps), move || check_gegenbauer(sigma, eps)));
    }

    let mut arc = vec![1.0, 3.0, 1e-8];
    let mut rng = family_rng(seed, 5);
    arc.extend((0..DRAWS).map(|_| log_uniform(&mut rng, 1e-4, 1e4)));
    for beta in arc {
        cases.push(Case::single("arc_identity", format!("beta={}", beta), move || Ok(check_arc_identity(beta)?.at_tolerance(CHAIN_ARC_TOL))));
    }

    let mut xis = vec![0.5, 1.0];
    xis.extend((1..=8).map(|n| 0.5 * n as f64));
    let mut rng = family_rng(seed, 6);
    xis.extend((0..DRAWS).map(|_| rng.gen_range(0.05..40.0)));
    for xi in xis {
        cases.push(Case::single("duplication", format!("xi={}", xi), move || check_duplication(xi)));
    }
    cases
}

/// `(|z|, 0, ..., 0)` with the given `tau`.
pub fn axis_point(n: usize, zmag: f64, tau: f64) -> Point {
    let mut x = vec![0.0; n];
    x[0] = zmag;
    Point::from_real(&x, &vec![0.0; n], tau).expect("finite coordinates")
}

/// Grid `n in 1..=4`, `|z| in {0.25, 0.5, 1, 2}`, `tau in {0, 0.5, 1, 4, 10}`.
pub fn theorem_grid() -> Vec<(usize, f64, f64)> {
    let mut grid = Vec::new();
    for n in 1..=4 {
        for zmag in [0.25, 0.5, 1.0, 2.0] {
            for tau in [0.0, 0.5, 1.0, 4.0, 10.0] {
                grid.push((n, zmag, tau));
            }
        }
    }
    grid
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, spread: f64) -> Point {
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-spread..spread)).collect();
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-spread..spread)).collect();
    Point::from_real(&x, &y, rng.gen_range(-spread..spread)).expect("finite coordinates")
}

pub fn kernel_cases(seed: u64) -> Vec<Case> {
    let cfg = QuadConfig::default();
    let mut cases = Vec::new();

    let mut points: Vec<(usize, Point)> = vec![
        (1, axis_point(1, 1.0, 0.0)),
        (2, axis_point(2, 1.0, 1.0)),
        (3, axis_point(3, 1.0, 0.5)),
    ];
    points.extend(theorem_grid().into_iter().map(|(n, zmag, tau)| (n, axis_point(n, zmag, tau))));
    let mut rng = family_rng(seed, 11);
    for _ in 0..DRAWS {
        let n = rng.gen_range(1..=4);
        // random direction with |z| in [0.25, 2]
        let dir = random_point(&mut rng, n, 1.0);
        let scale = rng.gen_range(0.25..2.0) / dir.z_norm_sqr().sqrt().max(1e-3);
        let z = dir.z.iter().map(|c| c * scale).collect();
        points.push((n, Point::new(z, rng.gen_range(-10.0..10.0)).expect("finite coordinates")));
    }
    for (n, p) in points {
        cases.push(Case::new("integral_vs_closed", format!("n={}, p={:?}", n, p), move || check_integral_vs_closed(n, &p, &cfg)));
    }

    for n in [1, 2] {
        for tau in [0.0, 1.0] {
            let p = axis_point(n, 1.0, tau);
            cases.push(Case::new("resolvent_limit", format!("n={}, p={:?}", n, p), move || check_resolvent_limit(n, &p, &Point::identity(n), 4, &cfg)));
        }
    }
    let mut rng = family_rng(seed, 12);
    for _ in 0..3 {
        let n = rng.gen_range(1..=2);
        let g = random_point(&mut rng, n, 2.0);
        let p = axis_point(n, 1.0, rng.gen_range(-1.0..1.0));
        cases.push(Case::new("resolvent_limit_translation", format!("n={}, p={:?}, g={:?}", n, p, g), move || {
            check_resolvent_limit_translation(n, &p, &Point::identity(n), &g, 3, &cfg)
        }));
    }
    for _ in 0..DRAWS {
        let n = rng.gen_range(1..=3);
        let p = random_point(&mut rng, n, 1.0);
        let q = random_point(&mut rng, n, 1.0);
        let g = random_point(&mut rng, n, 3.0);
        let zeta = Complex::new(-log_uniform(&mut rng, 0.05, 5.0), 0.0);
        cases.push(Case::new("resolvent_symmetry", format!("n={}, p={:?}, q={:?}, g={:?}, zeta={}", n, p, q, g, zeta), move || check_resolvent_symmetry(n, &p, &q, &g, zeta, &cfg)));
    }
    cases
}

fn distributional_config() -> QuadConfig {
    QuadConfig::default().with_rel_tol(1e-6).with_abs_tol(1e-9)
}

/// Exclusion radius used by the suite.
pub const EXCLUSION_RADIUS: f64 = 1e-3;

/// The named test functions of the distributional suite:
/// `g = exp(-|z|^2 - tau^2)`, `(1 + x) g`, a shifted anisotropic Gaussian
/// and `tau^2 g`.
pub fn distributional_test_functions() -> Vec<(&'static str, Box<dyn TestFunction<f64>>)> {
    let g = Gaussian::standard(1);
    let one_plus_x = Polynomial::new(1)
        .term(1.0, &[0], &[0], 0)
        .and_then(|p| p.term(1.0, &[1], &[0], 0))
        .expect("n = 1 exponents");
    let tau2 = Polynomial::new(1).term(1.0, &[0], &[0], 2).expect("n = 1 exponents");
    let centre = Point::from_real(&[0.3], &[-0.2], 0.4).expect("finite coordinates");
    vec![
        ("gaussian", Box::new(g.clone())),
        ("one_plus_x_gaussian", Box::new(Product::new(one_plus_x, g.clone()))),
        (
            "shifted_anisotropic_gaussian",
            Box::new(Gaussian::new(&[2.0], 0.5, &centre).expect("positive widths")),
        ),
        ("tau_squared_gaussian", Box::new(Product::new(tau2, g))),
    ]
}

fn distributional_case(label: &'static str, phi: Box<dyn TestFunction<f64>>, seed_index: f64) -> Case {
    let cfg = distributional_config();
    Case::single(label, format!("function #{}", seed_index), move || {
        let b = phi.support_radius().ceil();
        Ok(check_distributional(phi.as_ref(), &cfg, EXCLUSION_RADIUS, b)?.with_parameter("function", seed_index))
    })
}

pub fn distributional_cases(seed: u64) -> Vec<Case> {
    let mut functions = distributional_test_functions();
    let mut rng = family_rng(seed, 21);
    for _ in 0..DRAWS {
        let a = rng.gen_range(0.5..2.0);
        let b = rng.gen_range(0.5..2.0);
        let centre = random_point(&mut rng, 1, 0.5);
        functions.push(("random_gaussian", Box::new(Gaussian::new(&[a], b, &centre).expect("positive widths"))));
    }
    let mut cases: Vec<Case> = functions
        .into_iter()
        .enumerate()
        .map(|(i, (label, phi))| distributional_case(label, phi, i as f64))
        .collect();
    cases.push(Case::new("distributional_constant", "fixed test functions", || {
        Ok(vec![distributional_constant(&run_cases(&distributional_cases_fixed()).reports)?])
    }));
    cases
}

fn distributional_cases_fixed() -> Vec<Case> {
    distributional_test_functions()
        .into_iter()
        .enumerate()
        .map(|(i, (label, phi))| distributional_case(label, phi, i as f64))
        .collect()
}

/// Consistency of `lhs / phi(0)` across test functions: `lhs` is the
/// largest ratio, `rhs` the smallest, judged at 1e-2 relative; the mean is
/// reported as the parameter `constant`.
pub fn distributional_constant(reports: &[VerificationReport]) -> Result<VerificationReport> {
    let ratios: Vec<f64> = reports.iter().filter_map(|r| r.parameter("ratio")).collect();
    if ratios.len() < 2 {
        return Err(Error::Precondition {
            function: "distributional_constant",
            detail: format!("need at least two test functions with phi(0) != 0, got {}", ratios.len()),
        });
    }
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(VerificationReport::real(
        "distributional_constant",
        &[("functions", ratios.len() as f64), ("constant", mean)],
        hi,
        lo,
        DISTRIBUTIONAL_TOL,
    )?)
}
