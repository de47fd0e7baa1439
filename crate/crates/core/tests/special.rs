use heiskern::numerics::QuadratureConfig;
use heiskern::special::{kummer_m, legendre_p, tricomi_psi, PsiEvalMode};
use heiskern::{Complex, QuadConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn psi(a: f64, c: f64, u: f64, mode: PsiEvalMode) -> f64 {
    let cfg = QuadConfig::default().with_rel_tol(1e-13).with_abs_tol(1e-300);
    tricomi_psi(Complex::new(a, 0.0), c, u, mode, &cfg).unwrap().re
}

#[test]
fn psi_large_argument_asymptote() {
    for (a, c) in [(0.5, 1.0), (1.0, 2.0), (1.5, 3.0), (2.0, 4.0), (0.7, 2.3)] {
        for (u, tol) in [(1e3, 0.05), (1e4, 0.005)] {
            let v = psi(a, c, u, PsiEvalMode::IntegralRepresentation);
            let scaled = u.powf(a) * v;
            assert!((scaled - 1.0).abs() <= tol, "a = {}, c = {}, u = {}: u^a Psi = {}", a, c, u, scaled);
        }
    }
}

#[test]
fn kummer_m_with_equal_parameters_is_exponential() {
    for a in [0.5, 1.0, 2.5] {
        for k in 0..=40 {
            let x = 0.5 * k as f64;
            let m = kummer_m(Complex::new(a, 0.0), Complex::new(a, 0.0), x).unwrap();
            assert!(((m.re - x.exp()) / x.exp()).abs() <= 1e-12 && m.im == 0.0, "a = {}, x = {}", a, x);
        }
    }
}

#[test]
fn gegenbauer_consistency_grid() {
    for sigma in [0.5, 1.0, 1.5, 2.0, 2.5] {
        for eps in [0.3, std::f64::consts::FRAC_PI_2, 2.5f64] {
            let lhs = legendre_p(sigma, -sigma, eps.cos()).unwrap();
            let rhs = (0.5 * eps.sin()).powf(sigma) / heiskern::numerics::gamma_real(1.0 + sigma).unwrap();
            assert!(((lhs - rhs) / rhs).abs() <= 1e-10, "sigma = {}, eps = {}", sigma, eps);
        }
    }
}

#[test]
fn psi_paths_agree_on_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut checked = 0;
    while checked < 60 {
        let a = rng.gen_range(0.3..5.0);
        let c: f64 = rng.gen_range(0.5..6.0);
        if (c - c.round()).abs() < 1e-3 {
            continue;
        }
        let u = rng.gen_range(0.1..20.0);
        let s = psi(a, c, u, PsiEvalMode::SeriesCombination);
        let i = psi(a, c, u, PsiEvalMode::IntegralRepresentation);
        assert!(((s - i) / i).abs() <= 1e-8, "a = {}, c = {}, u = {}: {} vs {}", a, c, u, s, i);
        checked += 1;
    }
}

#[test]
fn f32_instantiation_runs() {
    let cfg = QuadratureConfig::<f32>::default().with_rel_tol(1e-5).with_abs_tol(1e-7);
    let v = tricomi_psi(num_complex::Complex::new(1.0f32, 0.0), 2.0, 2.0, PsiEvalMode::IntegralRepresentation, &cfg).unwrap();
    assert!((v.re - 0.5).abs() < 1e-4);
}
