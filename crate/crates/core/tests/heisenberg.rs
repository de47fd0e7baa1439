use heiskern::heisenberg::{
    apply_sublaplacian, derivative_consistency, inverse, multiply, pair_geometry, Gaussian, HeisenbergPoint, Polynomial,
    Product,
};
use heiskern::{Complex, Point};
use proptest::prelude::*;

fn point_strategy(n: usize, range: f64) -> impl Strategy<Value = Point> {
    (
        prop::collection::vec((-range..range, -range..range), n),
        -range..range,
    )
        .prop_map(|(z, tau)| Point::new(z.into_iter().map(|(a, b)| Complex::new(a, b)).collect(), tau).unwrap())
}

fn integer_point(n: usize) -> impl Strategy<Value = Point> {
    (prop::collection::vec((-50i32..50, -50i32..50), n), -50i32..50).prop_map(|(z, tau)| {
        Point::new(z.into_iter().map(|(a, b)| Complex::new(a as f64, b as f64)).collect(), tau as f64).unwrap()
    })
}

fn max_diff(p: &Point, q: &Point) -> f64 {
    p.z.iter()
        .zip(&q.z)
        .map(|(a, b)| (a - b).norm())
        .fold((p.tau - q.tau).abs(), f64::max)
}

fn triple(range: f64) -> impl Strategy<Value = (Point, Point, Point)> {
    (1usize..=4).prop_flat_map(move |n| (point_strategy(n, range), point_strategy(n, range), point_strategy(n, range)))
}

#[test]
fn non_commutativity_witness() {
    let p = Point::from_real(&[1.0], &[0.0], 0.0).unwrap();
    let q = Point::from_real(&[0.0], &[1.0], 0.0).unwrap();
    assert_eq!(multiply(&p, &q).unwrap().tau, -2.0);
    assert_eq!(multiply(&q, &p).unwrap().tau, 2.0);
}

proptest! {
    #[test]
    fn associativity_is_exact_on_integers(
        (p, q, r) in (1usize..=3).prop_flat_map(|n| (integer_point(n), integer_point(n), integer_point(n)))
    ) {
        let left = multiply(&multiply(&p, &q).unwrap(), &r).unwrap();
        let right = multiply(&p, &multiply(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn associativity_on_random_points((p, q, r) in triple(2.0)) {
        let left = multiply(&multiply(&p, &q).unwrap(), &r).unwrap();
        let right = multiply(&p, &multiply(&q, &r).unwrap()).unwrap();
        prop_assert!(max_diff(&left, &right) <= 1e-14, "{:?} vs {:?}", left, right);
    }

    #[test]
    fn inverse_is_two_sided((p, _, _) in triple(10.0)) {
        prop_assert!(multiply(&p, &inverse(&p)).unwrap().is_identity());
        prop_assert!(multiply(&inverse(&p), &p).unwrap().is_identity());
        prop_assert_eq!(inverse(&inverse(&p)), p);
    }

    #[test]
    fn pair_geometry_is_left_invariant((g, p, q) in triple(3.0)) {
        let base = pair_geometry(&p, &q).unwrap();
        let moved = pair_geometry(&multiply(&g, &p).unwrap(), &multiply(&g, &q).unwrap()).unwrap();
        prop_assert!((base.mu - moved.mu).abs() <= 1e-12 * base.mu.max(1.0));
        prop_assert!((base.theta - moved.theta).abs() <= 1e-12 * base.theta.abs().max(1.0));
    }

    #[test]
    fn pair_geometry_is_the_difference_q_inv_p((_, p, q) in triple(3.0)) {
        let geo = pair_geometry(&p, &q).unwrap();
        let d = multiply(&inverse(&q), &p).unwrap();
        prop_assert!((geo.mu - 2.0 * d.z_norm_sqr()).abs() <= 1e-14 * geo.mu.max(1.0));
        prop_assert!((geo.theta - d.tau).abs() <= 1e-14 * geo.theta.abs().max(1.0));
    }

    #[test]
    fn product_derivatives_are_consistent(p in point_strategy(2, 1.5)) {
        let poly = Polynomial::new(2)
            .term(1.0, &[1, 0], &[0, 1], 1).unwrap()
            .term(-0.5, &[0, 2], &[0, 0], 0).unwrap();
        let centre = HeisenbergPoint::from_real(&[0.2, -0.1], &[0.0, 0.3], 0.5).unwrap();
        let phi = Product::new(poly, Gaussian::new(&[1.0, 0.7], 0.8, &centre).unwrap());
        let c = derivative_consistency(&phi, &p, 1e-5).unwrap();
        prop_assert!(c.within(1e-6), "{:?}", c);
        prop_assert!(apply_sublaplacian(&phi, &p).unwrap().is_finite());
    }
}
