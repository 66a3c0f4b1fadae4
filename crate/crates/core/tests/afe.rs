use levinson::afe::{
    afe_compare, afe_residual, arith_factor_check, g_factor, g_weight, mobius_divisor_sums,
    v_weight, x_factor, AfeShifts, ContourSpec, VWeight,
};
use levinson::zeta::ZetaContext;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

#[test]
fn stirling_forms_at_height_one_thousand() {
    let sh = AfeShifts::real(0.01, 0.01).unwrap();
    let t = 1e3;
    for &s in &[c(0.5, 0.0), c(1.0, 1.5), c(-1.0, 0.5), c(2.0, 0.0), c(0.0, -2.0), c(1.2, -1.4)] {
        let ratio = g_factor(s, t, &sh).unwrap() / c(t / TAU, 0.0).powc(s);
        assert!((ratio - 1.0).norm() < 0.05, "{s}: {ratio}");
    }
    let x = x_factor(t, &sh).unwrap() / (t / TAU).powf(-0.02);
    assert!((x - 1.0).norm() < 0.05);
}

#[test]
fn stirling_errors_decay_like_one_over_t() {
    let sh = AfeShifts::real(0.01, 0.01).unwrap();
    let s = c(1.0, 1.5);
    let ts = [1e2, 1e3, 1e4];
    let logs: Vec<f64> = ts.iter().map(|t: &f64| t.ln()).collect();
    let g_err: Vec<f64> = ts
        .iter()
        .map(|&t| (g_factor(s, t, &sh).unwrap() / c(t / TAU, 0.0).powc(s) - 1.0).norm().ln())
        .collect();
    let x_err: Vec<f64> = ts
        .iter()
        .map(|&t| (x_factor(t, &sh).unwrap() / (t / TAU).powf(-0.02) - 1.0).norm().ln())
        .collect();
    assert!(fit_slope(&logs, &g_err) <= -0.9);
    assert!(fit_slope(&logs, &x_err) <= -0.9);
}

#[test]
fn x_swap_symmetry() {
    let a = c(0.02, 0.01);
    let b = c(-0.03, 0.04);
    let x1 = x_factor(700.0, &AfeShifts::new(a, b).unwrap()).unwrap();
    let x2 = x_factor(700.0, &AfeShifts::new(b.conj(), a.conj()).unwrap()).unwrap();
    assert!((x1 - x2.conj()).norm() < 1e-12 * x1.norm());
}

#[test]
fn g_rejects_gamma_poles() {
    // (1/2 + alpha + s + it)/2 = 0 at s = -1/2 - alpha - it
    let sh = AfeShifts::real(0.0, 0.1).unwrap();
    assert!(g_factor(c(-0.5, -50.0), 50.0, &sh).is_err());
}

#[test]
fn g_weight_zero_locations() {
    let sh = AfeShifts::new(c(0.03, 0.02), c(0.01, -0.05)).unwrap();
    let z = (sh.alpha + sh.beta) / 2.0;
    for s in [z, -z] {
        assert!(g_weight(s, &sh).unwrap().norm() < 1e-14 * (s.norm_sqr()).exp());
    }
}

#[test]
fn v_weight_limits() {
    let cs = ContourSpec::default();
    let sh = AfeShifts::real(0.01, 0.01).unwrap();
    let v = VWeight::new(1e3, &sh, &cs).unwrap();
    // approaches the residue 1 as x/t shrinks
    let far = (v.eval(1e-3) - 1.0).norm();
    let near = (v.eval(1.0) - 1.0).norm();
    assert!(far < 1e-4 && far < near);
    // decays once x/t is large
    assert!(v.eval(1e6).norm() < 1e-3);
    assert!(v_weight(1e6, 1e2, &sh, &cs).unwrap().norm() < 1e-3);
    let mild = AfeShifts::real(0.25, 0.25).unwrap();
    let v = VWeight::new(1e3, &mild, &cs).unwrap();
    let vals: Vec<f64> = [1e-3, 1.0, 1e3].iter().map(|r| (v.eval(r * 1e3) - 1.0).norm()).collect();
    assert!(vals[0] < 0.05 && vals[0] < vals[1]);
    assert!(v.eval(1e6).norm() < 1e-6);
}

#[test]
fn v_weight_node_doubling() {
    let cs = ContourSpec::default();
    let sh = AfeShifts::real(0.01, 0.01).unwrap();
    let a = VWeight::new(1e3, &sh, &cs).unwrap().eval(1e3);
    let b = VWeight::new(1e3, &sh, &cs.doubled()).unwrap().eval(1e3);
    assert!((a - b).norm() < 1e-8);
}

#[test]
fn residual_decreases_with_truncation() {
    let ctx = ZetaContext::for_height(100.0);
    let sh = AfeShifts::real(0.01, 0.01).unwrap();
    let r1 = afe_residual(100.0, &sh, 25_000, &ctx).unwrap();
    let r2 = afe_residual(100.0, &sh, 50_000, &ctx).unwrap();
    assert!(r2 < r1);
}

#[test]
fn residual_at_height_two_hundred() {
    let t = 200.0f64;
    let ctx = ZetaContext::for_height(t);
    let shift = 1.0 / t.ln();
    let sh = AfeShifts::real(shift, shift).unwrap();
    let r1 = afe_residual(t, &sh, 20_000, &ctx).unwrap();
    let r2 = afe_residual(t, &sh, 40_000, &ctx).unwrap();
    assert!(r2 < 1e-3 && r2 < r1, "{r1} {r2}");
}

#[test]
fn residual_invariant_under_swap_and_reflection() {
    let ctx = ZetaContext::for_height(150.0);
    let sh = AfeShifts::real(0.03, 0.05).unwrap();
    let a = afe_compare(120.0, &sh, 20_000, &ctx).unwrap();
    let b = afe_compare(-120.0, &AfeShifts::real(0.05, 0.03).unwrap(), 20_000, &ctx).unwrap();
    assert!((a.lhs - b.lhs).norm() < 1e-12 * a.lhs.norm());
    assert!((a.rhs - b.rhs).norm() < 1e-9 * a.rhs.norm());
    assert!((a.residual() - b.residual()).abs() < 1e-9);
}

#[test]
fn afe_input_validation() {
    let ctx = ZetaContext::for_height(100.0);
    let sh = AfeShifts::real(0.01, 0.01).unwrap();
    assert!(afe_residual(20.0, &sh, 1000, &ctx).is_err());
    assert!(afe_residual(100.0, &sh, 0, &ctx).is_err());
    assert!(v_weight(0.0, 100.0, &sh, &ContourSpec::default()).is_err());
}

#[test]
fn arithmetical_factor_is_one_for_all_caps() {
    for cap in [1usize, 10, 100, 1000, 10_000] {
        assert!((arith_factor_check(0.5, cap).unwrap() - 1.0).abs() < 1e-12);
    }
    let sums = mobius_divisor_sums(10_000).unwrap();
    assert_eq!(sums[1], 1);
    assert!(sums[2..].iter().all(|&s| s == 0));
    // direct enumeration of hm = kn <= 300
    let mu = levinson::zeta::mobius_sieve(300).unwrap();
    let mut direct = 0.0;
    for h in 1..=300usize {
        for m in 1..=300 / h {
            let n_val = h * m;
            for k in 1..=n_val {
                if n_val % k == 0 {
                    let n = n_val / k;
                    direct += (mu[h] as f64) * (mu[k] as f64) * ((h * k * m * n) as f64).powf(-1.0);
                }
            }
        }
    }
    assert!((direct - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn g_factor_is_one_at_origin(a in -0.4f64..0.4, b in -0.4f64..0.4, t in 1.0f64..5e3) {
        let sh = AfeShifts::real(a, b).unwrap();
        prop_assert!((g_factor(c(0.0, 0.0), t, &sh).unwrap() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn g_conjugate_symmetry(a in -0.4f64..0.4, re in -2.0f64..2.0, im in -2.0f64..2.0, t in 10.0f64..5e3) {
        let sh = AfeShifts::real(a, a).unwrap();
        let s = c(re, im);
        prop_assume!(g_factor(s, t, &sh).is_ok());
        let x = g_factor(s, t, &sh).unwrap();
        let y = g_factor(s.conj(), t, &sh).unwrap();
        prop_assert!((y - x.conj()).norm() < 1e-10 * x.norm());
    }

    #[test]
    fn x_is_unimodular_at_zero_shift(t in 1.0f64..1e4) {
        let sh = AfeShifts::real(0.0, 0.0).unwrap();
        prop_assert!((x_factor(t, &sh).unwrap().norm() - 1.0).abs() < 1e-12);
    }
}
