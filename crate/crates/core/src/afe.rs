//! Approximate functional equation for `zeta(1/2 + alpha + it) zeta(1/2 + beta - it)`
//! and the diagonal arithmetical-factor identity.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::lgamma::{ln_gamma, POLE_TOL};
use crate::quad::GaussLegendre;
use crate::zeta::{zeta_em, ZetaContext};

/// Nodes per Gauss–Legendre panel on the vertical contour.
const PANEL_NODES: usize = 16;

/// Shifts `alpha`, `beta` of the approximate functional equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeShifts {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl AfeShifts {
    /// Requires `Re alpha, Re beta < 1/2`.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        if !(alpha.re < 0.5 && beta.re < 0.5) {
            return Err(invalid(
                "alpha/beta",
                format!("real parts must be < 1/2, got {alpha} and {beta}"),
            ));
        }
        Ok(Self { alpha, beta })
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    /// `(alpha, beta) -> (-beta, -alpha)`, the shifts of the dual sum.
    pub fn dual(&self) -> Self {
        Self {
            alpha: -self.beta,
            beta: -self.alpha,
        }
    }

    fn sum_nonzero(&self) -> Result<Complex64> {
        let s = self.alpha + self.beta;
        if s.norm() < 1e-300 {
            return Err(Error::Pole(
                "alpha + beta = 0 makes p(s) undefined".into(),
            ));
        }
        Ok(s)
    }
}

/// Vertical contour for the `V` integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub line_re: f64,
    pub half_len: f64,
    /// Total node count, split into 16-node panels.
    pub nodes: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            line_re: 1.0,
            half_len: 8.0,
            nodes: 256,
        }
    }
}

impl ContourSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < PANEL_NODES {
            return Err(invalid("nodes", format!("need at least {PANEL_NODES}")));
        }
        if (-self.half_len * self.half_len).exp() >= 1e-16 {
            return Err(invalid(
                "half_len",
                format!("e^(-half_len^2) must be below 1e-16, got half_len = {}", self.half_len),
            ));
        }
        if !(self.line_re > 0.0) {
            return Err(invalid("line_re", "the contour must lie right of s = 0"));
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            ..*self
        }
    }
}

/// `G(s) = e^{s^2} ((alpha+beta)^2 - (2s)^2) / (alpha+beta)^2`.
pub fn g_weight(s: Complex64, shifts: &AfeShifts) -> Result<Complex64> {
    let ab = shifts.sum_nonzero()?;
    let ab2 = ab * ab;
    Ok((s * s).exp() * (ab2 - 4.0 * s * s) / ab2)
}

fn checked_ln_gamma(z: Complex64) -> Result<Complex64> {
    // poles at 0, -1, -2, ...
    if z.re < 0.5 && (z.re - z.re.round()).abs() < POLE_TOL && z.im.abs() < POLE_TOL {
        return Err(Error::Pole(format!("gamma argument {z} is at a pole")));
    }
    ln_gamma(z)
}

/// `log g_{alpha,beta}(s, t)`.
pub fn ln_g_factor(s: Complex64, t: f64, shifts: &AfeShifts) -> Result<Complex64> {
    let i = Complex64::i();
    let a1 = (0.5 + shifts.alpha + i * t) / 2.0;
    let a2 = (0.5 + shifts.beta - i * t) / 2.0;
    let half = s / 2.0;
    Ok(-s * std::f64::consts::PI.ln() + checked_ln_gamma(a1 + half)? - checked_ln_gamma(a1)?
        + checked_ln_gamma(a2 + half)?
        - checked_ln_gamma(a2)?)
}

/// `g_{alpha,beta}(s, t) = pi^{-s} Gamma((1/2+alpha+s+it)/2) Gamma((1/2+beta+s-it)/2)
/// / (Gamma((1/2+alpha+it)/2) Gamma((1/2+beta-it)/2))`.
pub fn g_factor(s: Complex64, t: f64, shifts: &AfeShifts) -> Result<Complex64> {
    if t.abs() < 1.0 {
        return Err(invalid("t", format!("need |t| >= 1, got {t}")));
    }
    Ok(ln_g_factor(s, t, shifts)?.exp())
}

/// `X_{alpha,beta,t} = pi^{alpha+beta} Gamma((1/2-alpha-it)/2) Gamma((1/2-beta+it)/2)
/// / (Gamma((1/2+alpha+it)/2) Gamma((1/2+beta-it)/2))`.
pub fn x_factor(t: f64, shifts: &AfeShifts) -> Result<Complex64> {
    if t.abs() < 1.0 {
        return Err(invalid("t", format!("need |t| >= 1, got {t}")));
    }
    let i = Complex64::i();
    let (a, b) = (shifts.alpha, shifts.beta);
    let ln = (a + b) * std::f64::consts::PI.ln()
        + checked_ln_gamma((0.5 - a - i * t) / 2.0)?
        - checked_ln_gamma((0.5 + a + i * t) / 2.0)?
        + checked_ln_gamma((0.5 - b + i * t) / 2.0)?
        - checked_ln_gamma((0.5 + b - i * t) / 2.0)?;
    Ok(ln.exp())
}

/// `V_{alpha,beta}(x, t)` for fixed `(t, shifts)` and many `x`.
///
/// The contour weights `G(s) g(s,t) / (2 pi s)` do not depend on `x`, so
/// they are computed once; each evaluation is a sum of `x^{-s_j}` terms.
#[derive(Debug, Clone)]
pub struct VWeight {
    /// `(s_j, weight_j)` along the contour.
    nodes: Vec<(Complex64, Complex64)>,
}

impl VWeight {
    pub fn new(t: f64, shifts: &AfeShifts, contour: &ContourSpec) -> Result<Self> {
        contour.validate()?;
        if t.abs() < 1.0 {
            return Err(invalid("t", format!("need |t| >= 1, got {t}")));
        }
        let panels = contour.nodes.div_ceil(PANEL_NODES);
        let gl = GaussLegendre::new(PANEL_NODES);
        let h = 2.0 * contour.half_len / panels as f64;
        let mut nodes = Vec::with_capacity(panels * PANEL_NODES);
        for p in 0..panels {
            let lo = -contour.half_len + h * p as f64;
            for (y, w) in gl.mapped(lo, lo + h) {
                let s = Complex64::new(contour.line_re, y);
                // ds = i dy cancels the i in 1/(2 pi i)
                let weight = g_weight(s, shifts)? / s * ln_g_factor(s, t, shifts)?.exp() * w
                    / std::f64::consts::TAU;
                nodes.push((s, weight));
            }
        }
        Ok(Self { nodes })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let lx = x.ln();
        self.nodes
            .iter()
            .map(|&(s, w)| w * (-s * lx).exp())
            .sum()
    }
}

/// `V_{alpha,beta}(x, t)`, checked against a run with twice as many nodes.
pub fn v_weight(x: f64, t: f64, shifts: &AfeShifts, contour: &ContourSpec) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(invalid("x", format!("must be > 0, got {x}")));
    }
    let v = VWeight::new(t, shifts, contour)?.eval(x);
    let v2 = VWeight::new(t, shifts, &contour.doubled())?.eval(x);
    if (v - v2).norm() > 1e-6 * v2.norm().max(1.0) {
        return Err(Error::Quadrature(format!(
            "V({x}, {t}) changed by {:.3e} when doubling nodes",
            (v - v2).norm()
        )));
    }
    Ok(v2)
}

/// Both sides of the approximate functional equation at height `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeComparison {
    pub lhs: Complex64,
    pub rhs: Complex64,
}

impl AfeComparison {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Evaluate both sides with the double sums truncated at `mn <= truncation`.
pub fn afe_compare(
    t: f64,
    shifts: &AfeShifts,
    truncation: usize,
    ctx: &ZetaContext,
) -> Result<AfeComparison> {
    if !(50.0..=1e4).contains(&t.abs()) {
        return Err(invalid("t", format!("need 50 <= |t| <= 1e4, got {t}")));
    }
    if truncation < 1 {
        return Err(invalid("truncation", "must be >= 1"));
    }
    let i = Complex64::i();
    let (a, b) = (shifts.alpha, shifts.beta);
    let lhs = zeta_em(0.5 + a + i * t, ctx)? * zeta_em(0.5 + b - i * t, ctx)?;

    let contour = ContourSpec::default();
    let v_main = VWeight::new(t, shifts, &contour)?;
    let v_dual = VWeight::new(t, &shifts.dual(), &contour)?;
    let x = x_factor(t, shifts)?;

    // m^{-1/2-alpha-it}, n^{-1/2-beta+it} and their dual counterparts
    let powers = |e: Complex64| -> Vec<Complex64> {
        (0..=truncation)
            .map(|k| {
                if k == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    (-e * (k as f64).ln()).exp()
                }
            })
            .collect()
    };
    let m_main = powers(0.5 + a + i * t);
    let n_main = powers(0.5 + b - i * t);
    let m_dual = powers(0.5 - b + i * t);
    let n_dual = powers(0.5 - a - i * t);

    // group by the product mn, since V depends on it alone
    let mut main = vec![Complex64::new(0.0, 0.0); truncation + 1];
    let mut dual = vec![Complex64::new(0.0, 0.0); truncation + 1];
    for m in 1..=truncation {
        let (am, dm) = (m_main[m], m_dual[m]);
        for n in 1..=truncation / m {
            main[m * n] += am * n_main[n];
            dual[m * n] += dm * n_dual[n];
        }
    }
    let mut rhs_main = Complex64::new(0.0, 0.0);
    let mut rhs_dual = Complex64::new(0.0, 0.0);
    for k in 1..=truncation {
        let xk = k as f64;
        rhs_main += main[k] * v_main.eval(xk);
        rhs_dual += dual[k] * v_dual.eval(xk);
    }
    Ok(AfeComparison {
        lhs,
        rhs: rhs_main + x * rhs_dual,
    })
}

/// `|zeta(1/2+alpha+it) zeta(1/2+beta-it) - RHS|` with the sums truncated
/// at `mn <= truncation`.
pub fn afe_residual(t: f64, shifts: &AfeShifts, truncation: usize, ctx: &ZetaContext) -> Result<f64> {
    Ok(afe_compare(t, shifts, truncation, ctx)?.residual())
}

/// `sum_{h | n} mu(h)` for `0 <= n <= cap` (index 0 holds 0), in exact
/// integer arithmetic.
pub fn mobius_divisor_sums(cap: usize) -> Result<Vec<i64>> {
    let mu = crate::zeta::mobius_sieve(cap)?;
    let mut sums = vec![0i64; cap + 1];
    for h in 1..=cap {
        if mu[h] == 0 {
            continue;
        }
        for n in (h..=cap).step_by(h) {
            sums[n] += mu[h] as i64;
        }
    }
    Ok(sums)
}

/// `sum_{hm = kn <= cap} mu(h) mu(k) (hkmn)^{-1/2-s}` at real `s`.
///
/// Grouping by `N = hm = kn` turns the sum into
/// `sum_N N^{-1-2s} (sum_{h|N} mu(h))^2`, which is exactly 1.
pub fn arith_factor_check(s_re: f64, cap: usize) -> Result<f64> {
    if !(s_re > 0.0) {
        return Err(invalid("s_re", format!("must be > 0, got {s_re}")));
    }
    if cap < 1 {
        return Err(invalid("cap", "must be >= 1"));
    }
    let sums = mobius_divisor_sums(cap)?;
    Ok(sums
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &d)| ((d * d) as f64) * (n as f64).powf(-1.0 - 2.0 * s_re))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn g_weight_examples() {
        let sh = AfeShifts::real(0.01, 0.02).unwrap();
        assert_relative_eq!(g_weight(c(0.0, 0.0), &sh).unwrap().re, 1.0);
        for s in [0.015, -0.015] {
            assert!(g_weight(c(s, 0.0), &sh).unwrap().norm() < 1e-14);
        }
        let sh = AfeShifts::real(0.005, 0.005).unwrap();
        let g = g_weight(c(1.0, 0.0), &sh).unwrap();
        let expected = std::f64::consts::E * (0.0001 - 4.0) / 0.0001;
        assert_relative_eq!(g.re, expected, max_relative = 1e-12);
        let zero = AfeShifts::real(0.1, -0.1).unwrap();
        assert!(g_weight(c(0.3, 0.0), &zero).is_err());
    }

    #[test]
    fn shift_validation() {
        assert!(AfeShifts::real(0.5, 0.0).is_err());
        assert!(AfeShifts::real(0.2, 0.6).is_err());
        assert!(AfeShifts::real(0.49, -3.0).is_ok());
    }

    #[test]
    fn g_at_zero_is_one() {
        let sh = AfeShifts::new(c(0.03, 0.01), c(-0.02, 0.05)).unwrap();
        for t in [1.0, 40.0, 3000.0] {
            let g = g_factor(c(0.0, 0.0), t, &sh).unwrap();
            assert!((g - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn g_conjugate_symmetry_for_real_equal_shifts() {
        let sh = AfeShifts::real(0.02, 0.02).unwrap();
        let s = c(0.8, 1.7);
        let a = g_factor(s.conj(), 250.0, &sh).unwrap();
        let b = g_factor(s, 250.0, &sh).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn x_unimodular_at_zero_shift() {
        let sh = AfeShifts::real(0.0, 0.0).unwrap();
        assert_relative_eq!(x_factor(1e3, &sh).unwrap().norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn contour_validation() {
        assert!(ContourSpec::default().validate().is_ok());
        assert!(ContourSpec { half_len: 5.0, ..Default::default() }.validate().is_err());
        assert!(ContourSpec { nodes: 8, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn arith_factor_small_caps() {
        assert_eq!(arith_factor_check(0.5, 1).unwrap(), 1.0);
        let sums = mobius_divisor_sums(12).unwrap();
        assert_eq!(sums[1], 1);
        assert_eq!(sums[12], 0);
        assert!(arith_factor_check(0.0, 10).is_err());
    }
}
