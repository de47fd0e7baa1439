use heiskern::heisenberg::multiply;
use heiskern::kernels::{folland_closed, green_r0_closed, resolvent, KernelQuery};
use heiskern::{Complex, Point, QuadConfig};
use proptest::prelude::*;

fn point_strategy(n: usize, range: f64) -> impl Strategy<Value = Point> {
    (
        prop::collection::vec((-range..range, -range..range), n),
        -range..range,
    )
        .prop_map(|(z, tau)| Point::new(z.into_iter().map(|(a, b)| Complex::new(a, b)).collect(), tau).unwrap())
}

fn triple() -> impl Strategy<Value = (usize, Point, Point, Point)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), point_strategy(n, 2.0), point_strategy(n, 2.0), point_strategy(n, 2.0)))
}

proptest! {
    #[test]
    fn closed_form_is_homogeneous((n, p, _, _) in triple()) {
        prop_assume!(!p.is_identity());
        let base = folland_closed(&p, n).unwrap();
        for r in [0.5, 2.0, 3.0] {
            let scaled = folland_closed(&p.dilate(r), n).unwrap();
            let expected = r.powi(-2 * n as i32) * base;
            prop_assert!(((scaled - expected) / expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn closed_forms_are_positive((n, p, q, _) in triple()) {
        prop_assume!(!p.is_identity());
        prop_assert!(folland_closed(&p, n).unwrap() > 0.0);
        if let Ok(g) = green_r0_closed(&p, &q, n) {
            prop_assert!(g > 0.0);
        }
    }

    #[test]
    fn green_closed_is_translation_covariant((n, g, p, q) in triple()) {
        let base = green_r0_closed(&p, &q, n).unwrap();
        let moved = green_r0_closed(&multiply(&g, &p).unwrap(), &multiply(&g, &q).unwrap(), n).unwrap();
        prop_assert!(((base - moved) / base).abs() <= 1e-12, "{} vs {}", base, moved);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn resolvent_is_symmetric((n, _, p, q) in triple(), zeta in -3.0f64..-0.05) {
        prop_assume!(n <= 2);
        let eval = |a: &Point, b: &Point| {
            let query = KernelQuery::new(n, a.clone()).with_source(b.clone()).with_zeta(Complex::new(zeta, 0.0)).with_cfg(QuadConfig::default());
            resolvent(&query).unwrap().value
        };
        let pq = eval(&p, &q);
        let qp = eval(&q, &p);
        prop_assert!((pq - qp).norm() <= 1e-9, "{} vs {}", pq, qp);
    }
}
