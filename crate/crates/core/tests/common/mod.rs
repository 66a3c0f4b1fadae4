//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Borwein's alternating-series algorithm for `eta(s)`, turned into `zeta(s)`.
pub fn zeta_borwein(s: Complex64, n: usize) -> Complex64 {
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / n as f64; // i = 0 term of the inner ratio, times n later
    let mut acc = 0.0;
    for i in 0..=n {
        if i > 0 {
            let fi = i as f64;
            term *= (n as f64 + fi - 1.0) * (n as f64 - fi + 1.0) * 4.0 / ((2.0 * fi - 1.0) * (2.0 * fi));
        }
        acc += term;
        d.push(n as f64 * acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let pow = (-s * ((k + 1) as f64).ln()).exp();
        sum += sign * (d[k] - dn) * pow;
    }
    let eta = -sum / dn;
    eta / (1.0 - (Complex64::new(2f64.ln(), 0.0) * (1.0 - s)).exp())
}

pub fn zeta_oracle(s: Complex64) -> Complex64 {
    zeta_borwein(s, 80)
}

/// Riemann–Siegel theta by its asymptotic expansion.
pub fn rs_theta(t: f64) -> f64 {
    use std::f64::consts::PI;
    t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// Hardy's `Z(t) = e^{i theta(t)} zeta(1/2 + it)` from the oracle.
pub fn hardy_z(t: f64) -> f64 {
    (Complex64::from_polar(1.0, rs_theta(t)) * zeta_oracle(Complex64::new(0.5, t))).re
}

pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let mut fa = f(a);
    for _ in 0..iters {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Lanczos approximation (g = 7, 9 coefficients) of `ln Gamma(z)` for
/// `Re z >= 1/2`.
pub fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let z = z - 1.0;
    let mut x = Complex64::new(C[0], 0.0);
    for (i, &c) in C.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Naive Möbius function by trial division.
pub fn mobius_naive(mut n: u64) -> i8 {
    if n == 1 {
        return 1;
    }
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Composite Simpson in two dimensions, an oracle for weighted
/// unit-square integrals.
pub fn simpson_2d<F: Fn(f64, f64) -> f64>(f: F, n: usize) -> f64 {
    let n = n + n % 2;
    let h = 1.0 / n as f64;
    let w = |i: usize| -> f64 {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut acc = 0.0;
    for i in 0..=n {
        for k in 0..=n {
            acc += w(i) * w(k) * f(i as f64 * h, k as f64 * h);
        }
    }
    acc * h * h / 9.0
}
