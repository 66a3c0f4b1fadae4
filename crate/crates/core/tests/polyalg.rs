mod common;

use approx::assert_relative_eq;
use levinson::poly::exp_moments;
use levinson::quad::GaussLegendre;
use levinson::{exp_moment, BivariatePolynomial, Polynomial};
use proptest::prelude::*;

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 1..=max_len)
}

#[test]
fn exp_moment_matches_adaptive_quadrature() {
    for &r in &[-2.5, -0.7, -0.2, -1e-3, 1e-3, 0.2, 0.49, 0.5, 1.3, 2.0, 3.0] {
        for k in 0..=12 {
            let f = |v: f64| (2.0 * r * v).exp() * v.powi(k as i32);
            let oracle = common::adaptive_simpson(&f, 0.0, 1.0, 1e-15);
            assert_relative_eq!(exp_moment(k, r), oracle, max_relative = 1e-11);
        }
    }
    let oracle = common::adaptive_simpson(&|v: f64| (2.6 * v).exp(), 0.0, 1.0, 1e-15);
    assert_relative_eq!(exp_moment(0, 1.3), oracle, max_relative = 1e-12);
    assert_relative_eq!(oracle, 4.793_7, epsilon = 1e-4);
}

#[test]
fn weighted_integral_matches_simpson_oracle() {
    let g = BivariatePolynomial::new(vec![vec![0.0, 1.0]]);
    let oracle = common::simpson_2d(|_, v| (2.6 * v).exp() * v, 400);
    assert_relative_eq!(g.integrate_unit_square_weighted(1.3), oracle, max_relative = 1e-10);
    assert_relative_eq!(g.integrate_unit_square_weighted(1.3), exp_moment(1, 1.3), max_relative = 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_identity(k in 1usize..20, r in prop_oneof![-3.0f64..-1e-3, 1e-3f64..3.0]) {
        let lhs = 2.0 * r * exp_moment(k, r) + k as f64 * exp_moment(k - 1, r);
        let rhs = (2.0 * r).exp();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn continuity_at_zero(k in 0usize..25) {
        prop_assert!((exp_moment(k, 1e-8) - 1.0 / (k + 1) as f64).abs() < 1e-7);
        prop_assert!((exp_moment(k, -1e-8) - 1.0 / (k + 1) as f64).abs() < 1e-7);
    }

    #[test]
    fn moments_are_positive_and_decreasing_in_k(r in -3.0f64..3.0) {
        let m = exp_moments(15, r);
        for w in m.windows(2) {
            prop_assert!(w[1] > 0.0 && w[1] < w[0]);
        }
    }

    #[test]
    fn bivariate_integral_matches_gauss_legendre(
        rows in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 1..=9), 1..=9),
        r in 0.0f64..3.0,
    ) {
        let g = BivariatePolynomial::new(rows);
        let gl = GaussLegendre::new(24);
        let oracle = gl.integrate(0.0, 1.0, |u| gl.integrate(0.0, 1.0, |v| (2.0 * r * v).exp() * g.eval(u, v)));
        let exact = g.integrate_unit_square_weighted(r);
        let scale = gl.integrate(0.0, 1.0, |u| gl.integrate(0.0, 1.0, |v| (2.0 * r * v).exp() * g.eval(u, v).abs()));
        prop_assert!((exact - oracle).abs() <= 1e-10 * scale.max(1e-300), "{exact} vs {oracle}");
    }

    #[test]
    fn shift_restricts_to_original(c in coeffs(9), s in -2.0f64..2.0, y in -2.0f64..2.0) {
        let p = Polynomial::new(c);
        let b = p.shift(s);
        let direct = p.eval(y);
        prop_assert!((b.eval(0.0, y) - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
    }

    #[test]
    fn shift_evaluates_translate(c in coeffs(8), s in -2.0f64..2.0, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let p = Polynomial::new(c);
        let v = p.eval(y + s * x);
        prop_assert!((p.shift(s).eval(x, y) - v).abs() <= 1e-10 * (1.0 + v.abs()));
    }

    #[test]
    fn derivative_obeys_product_rule(a in coeffs(6), b in coeffs(6), x in -2.0f64..2.0) {
        let (pa, pb) = (Polynomial::new(a), Polynomial::new(b));
        let lhs = (&pa * &pb).derivative().eval(x);
        let rhs = pa.derivative().eval(x) * pb.eval(x) + pa.eval(x) * pb.derivative().eval(x);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn trailing_coefficient_nonzero(c in prop::collection::vec(prop_oneof![Just(0.0), -1.0f64..1.0], 0..8)) {
        let p = Polynomial::new(c);
        if let Some(last) = p.coeffs().last() {
            prop_assert!(*last != 0.0);
            prop_assert_eq!(p.degree(), p.coeffs().len() - 1);
        } else {
            prop_assert!(p.is_zero());
        }
    }

    #[test]
    fn display_parses_back(c in coeffs(7)) {
        let p = Polynomial::new(c);
        let q: Polynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(p, q);
    }
}
