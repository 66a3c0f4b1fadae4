//! Dense real polynomials in one and two variables.
//!
//! Coefficients are stored lowest degree first. The degrees that occur in
//! mollifier computations stay small (below ~20 after squaring), so plain
//! `f64` arithmetic on dense vectors is accurate far beyond the tolerances
//! the rest of the crate needs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Error;

/// Real polynomial `sum_j coeffs[j] x^j`.
///
/// The highest stored coefficient is nonzero unless the polynomial is zero,
/// in which case `coeffs` is empty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^j`, zero past the degree.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| j as f64 * c)
                .collect(),
        )
    }

    /// `int_0^1 p(x) dx`.
    pub fn integral_unit(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c / (j + 1) as f64)
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Expand `p(y + scale * x)` as a polynomial in `(x, y)`.
    ///
    /// Entry `(i, k)` of the result is the coefficient of `x^i y^k`, so
    /// row 0 is `p` itself in `y` and row `i` is `scale^i p^{(i)}(y) / i!`.
    pub fn shift(&self, scale: f64) -> BivariatePolynomial {
        let n = self.coeffs.len();
        let mut grid = vec![vec![0.0; n]; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            // binomial(j, i) built incrementally
            let mut binom = 1.0;
            let mut sp = 1.0;
            for i in 0..=j {
                grid[i][j - i] += c * binom * sp;
                binom = binom * (j - i) as f64 / (i + 1) as f64;
                sp *= scale;
            }
        }
        BivariatePolynomial::new(grid)
    }
}

impl fmt::Display for Polynomial {
    /// Comma-separated coefficients, lowest degree first (`"0,1"` is `x`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: "empty coefficient list".into(),
            });
        }
        let coeffs = trimmed
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        input: s.to_string(),
                        reason: format!("`{tok}` is not a finite number"),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Real polynomial in two variables; entry `(i, k)` multiplies `u^i v^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePolynomial {
    coeffs: Vec<Vec<f64>>,
}

impl BivariatePolynomial {
    /// Builds from a grid; ragged rows are padded with zeros.
    pub fn new(mut coeffs: Vec<Vec<f64>>) -> Self {
        let width = coeffs.iter().map(Vec::len).max().unwrap_or(0);
        for row in &mut coeffs {
            row.resize(width, 0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `a(u) * b(v)`.
    pub fn outer(a: &Polynomial, b: &Polynomial) -> Self {
        Self::new(
            a.coeffs()
                .iter()
                .map(|&ai| b.coeffs().iter().map(|&bk| ai * bk).collect())
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, k: usize) -> f64 {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(k))
            .copied()
            .unwrap_or(0.0)
    }

    /// Number of rows and columns of the coefficient grid.
    pub fn shape(&self) -> (usize, usize) {
        (
            self.coeffs.len(),
            self.coeffs.first().map(Vec::len).unwrap_or(0),
        )
    }

    /// The polynomial in the second variable multiplying `u^i`.
    pub fn row(&self, i: usize) -> Polynomial {
        self.coeffs
            .get(i)
            .map(|r| Polynomial::new(r.clone()))
            .unwrap_or_default()
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, row| {
                acc * u + row.iter().rev().fold(0.0, |a, &c| a * v + c)
            })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|row| row.iter().map(|c| c * s).collect())
                .collect(),
        )
    }

    /// `int_0^1 int_0^1 e^{2 r v} b(u, v) du dv`, exactly up to rounding:
    /// the monomial `u^i v^k` contributes `exp_moment(k, r) / (i + 1)`.
    pub fn integrate_unit_square_weighted(&self, r: f64) -> f64 {
        let (_, width) = self.shape();
        if width == 0 {
            return 0.0;
        }
        let moments = exp_moments(width - 1, r);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .zip(&moments)
                    .map(|(c, m)| c * m)
                    .sum::<f64>()
                    / (i + 1) as f64
            })
            .sum()
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let (r1, c1) = self.shape();
        let (r2, c2) = rhs.shape();
        let (rows, cols) = (r1.max(r2), c1.max(c2));
        BivariatePolynomial::new(
            (0..rows)
                .map(|i| (0..cols).map(|k| self.coeff(i, k) + rhs.coeff(i, k)).collect())
                .collect(),
        )
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let (r1, c1) = self.shape();
        let (r2, c2) = rhs.shape();
        if r1 * c1 == 0 || r2 * c2 == 0 {
            return BivariatePolynomial::zero();
        }
        let mut out = vec![vec![0.0; c1 + c2 - 1]; r1 + r2 - 1];
        for (i, row_a) in self.coeffs.iter().enumerate() {
            for (k, &a) in row_a.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (j, row_b) in rhs.coeffs.iter().enumerate() {
                    for (l, &b) in row_b.iter().enumerate() {
                        out[i + j][k + l] += a * b;
                    }
                }
            }
        }
        BivariatePolynomial::new(out)
    }
}

/// `int_0^1 e^{2 r v} v^k dv`.
///
/// The upward recurrence `E_k = (e^{2r} - k E_{k-1}) / (2r)` damps rounding
/// errors only while `k < |2r|`; beyond that a positive-term series is used.
pub fn exp_moment(k: usize, r: f64) -> f64 {
    let a = 2.0 * r;
    if a == 0.0 {
        return 1.0 / (k + 1) as f64;
    }
    if a.abs() > k as f64 {
        let ea = a.exp();
        let mut e = a.exp_m1() / a;
        for j in 1..=k {
            e = (ea - j as f64 * e) / a;
        }
        e
    } else {
        exp_moment_series(k, a)
    }
}

/// All of `exp_moment(0..=kmax, r)`.
pub fn exp_moments(kmax: usize, r: f64) -> Vec<f64> {
    (0..=kmax).map(|k| exp_moment(k, r)).collect()
}

fn exp_moment_series(k: usize, a: f64) -> f64 {
    if a > 0.0 {
        // sum_n a^n / (n! (n + k + 1))
        let mut term = 1.0;
        let mut sum = 1.0 / (k + 1) as f64;
        for n in 1..400 {
            term *= a / n as f64;
            let add = term / (n + k + 1) as f64;
            sum += add;
            if add < 1e-18 * sum {
                break;
            }
        }
        sum
    } else {
        // substitute v = 1 - w: e^a k! sum_n |a|^n / (n + k + 1)!
        let b = -a;
        let mut term = 1.0 / (k + 1) as f64;
        let mut sum = term;
        for n in 1..400 {
            term *= b / (n + k + 1) as f64;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        a.exp() * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[0.0, 1.0]).eval(1.0), 1.0);
        assert_eq!(p(&[1.0, -1.0]).eval(0.0), 1.0);
        assert_eq!(p(&[0.0, 2.0, 1.0]).eval(3.0), 15.0);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let q = p(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(q.degree(), 1);
        assert!(p(&[0.0, 0.0]).is_zero());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[0.0, 1.0]).derivative(), p(&[1.0]));
        assert_eq!(p(&[1.0, -1.0]).derivative(), p(&[-1.0]));
        assert_eq!(p(&[0.0, 0.0, 0.0, 1.0]).derivative(), p(&[0.0, 0.0, 3.0]));
        assert!(p(&[5.0]).derivative().is_zero());
    }

    #[test]
    fn shift_examples() {
        // x + u
        let s = p(&[0.0, 1.0]).shift(1.0);
        assert_eq!(s.coeff(1, 0), 1.0);
        assert_eq!(s.coeff(0, 1), 1.0);
        assert_eq!(s.coeff(0, 0), 0.0);
        // 1 - v - 0.5 x
        let s = p(&[1.0, -1.0]).shift(0.5);
        assert_eq!(s.coeff(0, 0), 1.0);
        assert_eq!(s.coeff(0, 1), -1.0);
        assert_eq!(s.coeff(1, 0), -0.5);
        // x^2 + 2ux + u^2
        let s = p(&[0.0, 0.0, 1.0]).shift(1.0);
        assert_eq!(s.coeff(2, 0), 1.0);
        assert_eq!(s.coeff(1, 1), 2.0);
        assert_eq!(s.coeff(0, 2), 1.0);
    }

    #[test]
    fn parse_and_display() {
        let q: Polynomial = "1,-1".parse().unwrap();
        assert_eq!(q, p(&[1.0, -1.0]));
        assert_eq!(q.to_string(), "1,-1");
        assert_eq!(" 0 , 1 ".parse::<Polynomial>().unwrap(), p(&[0.0, 1.0]));
        assert!("1,x".parse::<Polynomial>().is_err());
        assert!("".parse::<Polynomial>().is_err());
        assert!("1,inf".parse::<Polynomial>().is_err());
    }

    #[test]
    fn exp_moment_trivial_values() {
        assert_eq!(exp_moment(0, 0.0), 1.0);
        assert_eq!(exp_moment(3, 0.0), 0.25);
    }

    #[test]
    fn exp_moment_matches_closed_form_k0() {
        // (e^{2.6} - 1) / 2.6, cross-checked against quadrature in tests/polyalg.rs
        assert_relative_eq!(exp_moment(0, 1.3), 4.793_745_398_077_574, max_relative = 1e-14);
    }

    #[test]
    fn exp_moment_negative_r_is_positive_and_small() {
        let e = exp_moment(10, -4.0);
        assert!(e > 0.0 && e < 1.0 / 11.0);
        // recurrence identity holds for negative r as well
        let lhs = -8.0 * exp_moment(10, -4.0) + 10.0 * exp_moment(9, -4.0);
        assert_relative_eq!(lhs, (-8.0f64).exp(), max_relative = 1e-11);
    }

    #[test]
    fn bivariate_integrate_examples() {
        let one = BivariatePolynomial::new(vec![vec![1.0]]);
        assert_eq!(one.integrate_unit_square_weighted(0.0), 1.0);
        let uv = BivariatePolynomial::new(vec![vec![0.0, 0.0], vec![0.0, 1.0]]);
        assert_relative_eq!(uv.integrate_unit_square_weighted(0.0), 0.25);
        let v = BivariatePolynomial::new(vec![vec![0.0, 1.0]]);
        assert_eq!(v.integrate_unit_square_weighted(1.3), exp_moment(1, 1.3));
    }

    #[test]
    fn bivariate_product_matches_pointwise() {
        let a = BivariatePolynomial::new(vec![vec![1.0, 2.0], vec![0.5, -1.0, 3.0]]);
        let b = BivariatePolynomial::new(vec![vec![-1.0], vec![0.0, 2.0], vec![1.0]]);
        let ab = &a * &b;
        for &(u, v) in &[(0.3, 0.7), (-1.2, 0.4), (2.0, -0.5)] {
            assert_relative_eq!(ab.eval(u, v), a.eval(u, v) * b.eval(u, v), max_relative = 1e-13);
        }
    }
}
