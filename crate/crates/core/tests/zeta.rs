mod common;

use approx::assert_relative_eq;
use levinson::lgamma::ln_gamma;
use levinson::zeta::{
    mobius_sieve, psi_eval, v_eval, zeta_derivative, zeta_derivs, zeta_em, MollifierSpec,
    ZetaContext,
};
use levinson::Polynomial;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const ZETA_HALF: f64 = -1.460_354_508_809_586_8;
const ZETA_PRIME_2: f64 = -0.937_548_254_315_843_8;
const FIRST_ZERO: f64 = 14.134_725_141_734_693;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn oracle_reproduces_published_constants() {
    assert_relative_eq!(common::zeta_oracle(c(2.0, 0.0)).re, PI * PI / 6.0, max_relative = 1e-14);
    assert_relative_eq!(common::zeta_oracle(c(0.5, 0.0)).re, ZETA_HALF, max_relative = 1e-13);
    let t = common::bisect(common::hardy_z, 14.0, 14.3, 60);
    assert!((t - FIRST_ZERO).abs() < 1e-10, "{t}");
}

#[test]
fn classical_values() {
    let ctx = ZetaContext::for_height(100.0);
    assert!((zeta_em(c(2.0, 0.0), &ctx).unwrap().re - PI * PI / 6.0).abs() < 1e-12);
    let half = zeta_em(c(0.5, 0.0), &ctx).unwrap();
    assert!((half.re - common::zeta_oracle(c(0.5, 0.0)).re).abs() < 1e-9);
    assert!(half.im.abs() < 1e-15);
}

#[test]
fn vanishes_at_bisected_first_zero() {
    let t = common::bisect(common::hardy_z, 14.0, 14.3, 60);
    let ctx = ZetaContext::for_height(100.0);
    assert!(zeta_em(c(0.5, t), &ctx).unwrap().norm() < 1e-10);
    assert!(zeta_em(c(0.5, 14.134725), &ctx).unwrap().norm() < 1e-5);
}

#[test]
fn agrees_with_borwein_oracle_in_the_strip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ctx = ZetaContext::for_height(40.0);
    for _ in 0..100 {
        let s = c(rng.gen_range(0.05..2.5), rng.gen_range(-30.0..30.0));
        if (s - 1.0).norm() < 0.1 {
            continue;
        }
        let oracle = common::zeta_oracle(s);
        let got = zeta_em(s, &ctx).unwrap();
        assert!((got - oracle).norm() < 1e-10 * oracle.norm().max(1.0), "{s}: {got} vs {oracle}");
    }
}

#[test]
fn derivatives_match_cauchy_circle_of_oracle() {
    let ctx = ZetaContext::for_height(40.0);
    for &s0 in &[c(2.0, 0.0), c(0.5, 14.0), c(0.3, -21.0), c(1.5, 7.5)] {
        // a wider circle keeps the j!/rho^j amplification of rounding small
        let rho = 0.3;
        let nodes = 64;
        let samples: Vec<(Complex64, Complex64)> = (0..nodes)
            .map(|m| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / nodes as f64);
                (w, common::zeta_oracle(s0 + rho * w))
            })
            .collect();
        let derivs = zeta_derivs(s0, 6, &ctx).unwrap();
        let mut fact = 1.0;
        for (j, d) in derivs.iter().enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            let coeff: Complex64 = samples.iter().map(|(w, f)| f * w.powi(-(j as i32))).sum::<Complex64>()
                / nodes as f64;
            let oracle = coeff * fact / rho.powi(j as i32);
            assert!((d - oracle).norm() < 1e-8 * oracle.norm().max(1.0), "j={j} at {s0}: {d} vs {oracle}");
        }
    }
    let ctx = ZetaContext::for_height(10.0);
    assert!((zeta_derivative(c(2.0, 0.0), 1, &ctx).unwrap().re - ZETA_PRIME_2).abs() < 1e-12);
}

#[test]
fn cauchy_circle_high_on_the_line_two() {
    // zeta'(2 + 100i): internal circle quadrature vs the differentiated sum
    let ctx = ZetaContext::for_height(120.0);
    let s0 = c(2.0, 100.0);
    let (rho, nodes) = (0.1, 64);
    let d: Complex64 = (0..nodes)
        .map(|m| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / nodes as f64);
            zeta_em(s0 + rho * w, &ctx).unwrap() / w
        })
        .sum::<Complex64>()
        / (nodes as f64 * rho);
    let direct = zeta_derivative(s0, 1, &ctx).unwrap();
    assert!((d - direct).norm() < 1e-8 * direct.norm());
}

#[test]
fn first_derivative_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let ctx = ZetaContext::for_height(1000.0);
    let h = 1e-5;
    for _ in 0..50 {
        let s = c(rng.gen_range(0.4..2.0), rng.gen_range(-1000.0..1000.0));
        if (s - 1.0).norm() < 0.2 {
            continue;
        }
        let fd = (zeta_em(s + h, &ctx).unwrap() - zeta_em(s - h, &ctx).unwrap()) / (2.0 * h);
        let d = zeta_derivative(s, 1, &ctx).unwrap();
        assert!((d - fd).norm() < 1e-6 * d.norm(), "{s}: {d} vs {fd}");
    }
    let s = c(3.0, 0.0);
    let fd = (zeta_em(s + h, &ctx).unwrap() - zeta_em(s - h, &ctx).unwrap()) / (2.0 * h);
    assert_relative_eq!(zeta_derivative(s, 1, &ctx).unwrap().re, fd.re, max_relative = 1e-6);
}

#[test]
fn euler_maclaurin_order_robustness() {
    let s = c(0.5, 1000.0);
    let lo = zeta_em(s, &ZetaContext::new(700, 6, 1000.0).unwrap()).unwrap();
    let hi = zeta_em(s, &ZetaContext::new(700, 10, 1000.0).unwrap()).unwrap();
    assert!((lo - hi).norm() < 1e-9 * hi.norm());
}

#[test]
fn bulk_context_is_accurate_enough() {
    for &t in &[60.0, 900.0, 5000.0] {
        let s = c(0.36, t);
        let fine = zeta_em(s, &ZetaContext::for_height(t)).unwrap();
        let bulk = zeta_em(s, &ZetaContext::bulk(t)).unwrap();
        assert!((fine - bulk).norm() < 1e-8 * fine.norm().max(1.0));
    }
}

#[test]
fn v_operator_examples() {
    let ctx = ZetaContext::for_height(50.0);
    let s = c(2.0, 0.0);
    let v = v_eval(s, &Polynomial::new(vec![1.0, -1.0]), 10.0, &ctx).unwrap();
    assert_relative_eq!(v.re, PI * PI / 6.0 + ZETA_PRIME_2 / 10.0, max_relative = 1e-12);
    let s = c(0.45, 31.0);
    let one = v_eval(s, &Polynomial::constant(1.0), 7.0, &ctx).unwrap();
    assert_eq!(one, zeta_em(s, &ctx).unwrap());
}

#[test]
fn mollifier_examples() {
    let base = MollifierSpec {
        p: Polynomial::new(vec![0.0, 1.0]),
        m: 2,
        sigma0_offset: 1.3,
        log_t: 10.0,
    };
    let psi = psi_eval(c(0.3, 17.0), &base).unwrap();
    assert!((psi - 1.0).norm() < 1e-15);
    let spec = MollifierSpec { m: 3, ..base.clone() };
    let s0 = spec.sigma0();
    let expected = 1.0 - (1.5f64.ln() / 3f64.ln()) / 2f64.sqrt();
    assert_relative_eq!(psi_eval(c(s0, 0.0), &spec).unwrap().re, expected, max_relative = 1e-14);
    assert!(psi_eval(c(s0, 0.0), &MollifierSpec { m: 1, ..base }).is_err());
}

#[test]
fn sieve_matches_trial_division_and_divisor_identity() {
    let mu = mobius_sieve(10_000).unwrap();
    for n in 1..=10_000u64 {
        assert_eq!(mu[n as usize], common::mobius_naive(n), "n = {n}");
    }
    let mut sums = vec![0i32; 10_001];
    for d in 1..=10_000 {
        for m in (d..=10_000).step_by(d) {
            sums[m] += mu[d] as i32;
        }
    }
    assert_eq!(sums[1], 1);
    assert!(sums[2..].iter().all(|&s| s == 0));
}

#[test]
fn ln_gamma_matches_lanczos() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let z = c(rng.gen_range(0.5..40.0), rng.gen_range(-2000.0..2000.0));
        let a = ln_gamma(z).unwrap();
        let b = common::ln_gamma_lanczos(z);
        // compare as values on the circle to sidestep branch choices
        let d = a - b;
        let wrapped = (d.im / (2.0 * PI)).round() * 2.0 * PI;
        assert!(d.re.abs() < 1e-10 * a.norm().max(1.0), "{z}");
        assert!((d.im - wrapped).abs() < 1e-10 * a.norm().max(1.0), "{z}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_symmetry(re in 0.05f64..3.0, im in 0.5f64..500.0) {
        let ctx = ZetaContext::for_height(500.0);
        let a = zeta_em(c(re, im), &ctx).unwrap();
        let b = zeta_em(c(re, -im), &ctx).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn v_is_linear_in_q(
        q1 in prop::collection::vec(-2.0f64..2.0, 0..=4),
        q2 in prop::collection::vec(-2.0f64..2.0, 0..=4),
        re in 0.3f64..2.0, im in -80.0f64..80.0, log_t in 4.0f64..20.0,
    ) {
        let ctx = ZetaContext::for_height(100.0);
        let s = c(re, im);
        prop_assume!((s - 1.0).norm() > 0.1);
        let mk = |e: &[f64]| { let mut v = vec![1.0]; v.extend_from_slice(e); Polynomial::new(v) };
        let (a, b) = (mk(&q1), mk(&q2));
        let sum = &(&a + &b) - &Polynomial::constant(1.0);
        let lhs = v_eval(s, &sum, log_t, &ctx).unwrap();
        let rhs = v_eval(s, &a, log_t, &ctx).unwrap() + v_eval(s, &b, log_t, &ctx).unwrap()
            - zeta_em(s, &ctx).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn psi_conjugate_symmetry(m in 2usize..400, im in -300.0f64..300.0) {
        let spec = MollifierSpec { p: Polynomial::new(vec![0.0, 0.5, 0.5]), m, sigma0_offset: 1.0, log_t: 9.0 };
        let s = c(spec.sigma0(), im);
        let a = psi_eval(s, &spec).unwrap();
        let b = psi_eval(s.conj(), &spec).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1.0));
    }
}
