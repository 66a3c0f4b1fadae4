//! Euler–Maclaurin evaluation of `zeta(s)` and its derivatives, the Möbius
//! function, the mollifier `psi(s)` and `V(s) = Q(-(1/L) d/ds) zeta(s)`.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::mainterm::check_mollifier_poly;
use crate::poly::Polynomial;

/// Highest derivative order the evaluator supports.
pub const MAX_DERIVATIVE: usize = 8;

/// `B_2, B_4, ..., B_24`.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Truncation settings for Euler–Maclaurin summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaContext {
    /// Direct summation runs over `n < em_terms`.
    pub em_terms: usize,
    /// Number of Bernoulli correction terms.
    pub em_order: usize,
    /// Largest `|Im s|` the context accepts.
    pub t_max: f64,
}

impl ZetaContext {
    pub fn new(em_terms: usize, em_order: usize, t_max: f64) -> Result<Self> {
        if !(2..=12).contains(&em_order) {
            return Err(invalid("em_order", format!("must be in 2..=12, got {em_order}")));
        }
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(invalid("t_max", format!("must be finite and >= 0, got {t_max}")));
        }
        let min_terms = (t_max / std::f64::consts::TAU).ceil() as usize;
        if em_terms < min_terms.max(1) {
            return Err(invalid(
                "em_terms",
                format!("need at least {min_terms} terms for heights up to {t_max}"),
            ));
        }
        Ok(Self {
            em_terms,
            em_order,
            t_max,
        })
    }

    /// Order 8 and `N = max(50, ceil(0.65 t_max) + 20)`, which keeps the
    /// Euler–Maclaurin remainder near `1e-12` relative for `t_max <= 1e4`.
    pub fn for_height(t_max: f64) -> Self {
        let t = t_max.abs();
        Self {
            em_terms: 50usize.max((0.65 * t).ceil() as usize + 20),
            em_order: 8,
            t_max: t.max(1.0),
        }
    }

    /// A cheaper setting for bulk evaluation: order 12 with
    /// `N = ceil(0.3 t_max) + 30`, remainder around `1e-9`.
    pub fn bulk(t_max: f64) -> Self {
        let t = t_max.abs();
        Self {
            em_terms: 50usize.max((0.3 * t).ceil() as usize + 30),
            em_order: 12,
            t_max: t.max(1.0),
        }
    }

    fn check(&self, s: Complex64) -> Result<()> {
        if !(s.re > 0.0) {
            return Err(Error::OutOfRange(format!("Re(s) = {} must be > 0", s.re)));
        }
        if s.im.abs() > self.t_max {
            return Err(Error::OutOfRange(format!(
                "|Im(s)| = {} exceeds t_max = {}",
                s.im.abs(),
                self.t_max
            )));
        }
        if (s - 1.0).norm() < 1e-12 {
            return Err(Error::Pole("zeta has a pole at s = 1".into()));
        }
        Ok(())
    }
}

/// The part of the Euler–Maclaurin formula beyond the direct sum:
/// `N^{1-s}/(s-1) + N^{-s}/2 + sum_k B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}`.
#[derive(Debug, Clone)]
pub struct EulerMaclaurinTail {
    n: usize,
    log_n: f64,
    /// `(B_2k/(2k)!, s(s+1)...(s+2k-2))` for `k = 1..=order`.
    corrections: Vec<(f64, Polynomial)>,
}

impl EulerMaclaurinTail {
    pub fn new(n: usize, order: usize) -> Self {
        let mut corrections = Vec::with_capacity(order);
        let mut rising = Polynomial::monomial(1);
        let mut fact = 2.0;
        for k in 1..=order.min(BERNOULLI_EVEN.len()) {
            if k > 1 {
                let a = (2 * k - 3) as f64;
                rising = &(&rising * &Polynomial::new(vec![a, 1.0]))
                    * &Polynomial::new(vec![a + 1.0, 1.0]);
                fact *= ((2 * k - 1) * (2 * k)) as f64;
            }
            corrections.push((BERNOULLI_EVEN[k - 1] / fact, rising.clone()));
        }
        Self {
            n,
            log_n: (n as f64).ln(),
            corrections,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Derivatives `0..=jmax` of the tail at `s`.
    pub fn derivs(&self, s: Complex64, jmax: usize) -> Vec<Complex64> {
        let ln = self.log_n;
        let n_pow = (-s * ln).exp(); // N^{-s}
        let binom = binomials(jmax);
        let neg_ln_pows: Vec<f64> = (0..=jmax).map(|i| (-ln).powi(i as i32)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); jmax + 1];

        // N^{1-s} / (s - 1)
        let inv = 1.0 / (s - 1.0);
        let mut inv_pows = Vec::with_capacity(jmax + 1);
        let mut acc = inv;
        let mut fact = 1.0;
        for i in 0..=jmax {
            if i > 0 {
                acc *= inv;
                fact *= i as f64;
            }
            // d^i/ds^i (s-1)^{-1} = (-1)^i i! (s-1)^{-i-1}
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            inv_pows.push(acc * sign * fact);
        }
        let lead = n_pow * self.n as f64;
        for j in 0..=jmax {
            let mut v = Complex64::new(0.0, 0.0);
            for i in 0..=j {
                v += binom[j][i] * neg_ln_pows[j - i] * inv_pows[i];
            }
            out[j] += lead * v;
            out[j] += 0.5 * neg_ln_pows[j] * n_pow;
        }

        // Bernoulli corrections
        let mut n_shift = n_pow / self.n as f64; // N^{-s-1}
        let inv_n2 = 1.0 / (self.n as f64 * self.n as f64);
        for (k, (coef, rising)) in self.corrections.iter().enumerate() {
            if k > 0 {
                n_shift *= inv_n2;
            }
            let mut poly = rising.clone();
            let mut poly_derivs = Vec::with_capacity(jmax + 1);
            for _ in 0..=jmax {
                poly_derivs.push(poly.eval_complex(s));
                poly = poly.derivative();
            }
            for j in 0..=jmax {
                let mut v = Complex64::new(0.0, 0.0);
                for i in 0..=j {
                    v += binom[j][i] * neg_ln_pows[j - i] * poly_derivs[i];
                }
                out[j] += coef * n_shift * v;
            }
        }
        out
    }
}

fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0]];
    for j in 1..=n {
        let prev = &rows[j - 1];
        let mut row = vec![1.0; j + 1];
        for i in 1..j {
            row[i] = prev[i - 1] + prev[i];
        }
        rows.push(row);
    }
    rows
}

/// `zeta^{(j)}(s)` for `j = 0..=jmax` in a single pass over `n < N`.
pub fn zeta_derivs(s: Complex64, jmax: usize, ctx: &ZetaContext) -> Result<Vec<Complex64>> {
    ctx.check(s)?;
    if jmax > MAX_DERIVATIVE {
        return Err(invalid(
            "j",
            format!("derivative order {jmax} above {MAX_DERIVATIVE}"),
        ));
    }
    let tail = EulerMaclaurinTail::new(ctx.em_terms, ctx.em_order);
    let mut out = tail.derivs(s, jmax);
    for n in (1..ctx.em_terms).rev() {
        let ln = (n as f64).ln();
        let term = (-s * ln).exp();
        let mut pow = 1.0;
        for o in out.iter_mut() {
            *o += term * pow;
            pow *= -ln;
        }
    }
    Ok(out)
}

pub fn zeta_em(s: Complex64, ctx: &ZetaContext) -> Result<Complex64> {
    Ok(zeta_derivs(s, 0, ctx)?[0])
}

/// `zeta^{(j)}(s)` for `1 <= j <= 8`.
pub fn zeta_derivative(s: Complex64, j: usize, ctx: &ZetaContext) -> Result<Complex64> {
    if j == 0 {
        return Err(invalid("j", "derivative order must be >= 1"));
    }
    Ok(zeta_derivs(s, j, ctx)?[j])
}

/// `V(s) = sum_j q_j (-1/L)^j zeta^{(j)}(s)`.
pub fn v_eval(s: Complex64, q: &Polynomial, log_t: f64, ctx: &ZetaContext) -> Result<Complex64> {
    if !(log_t > 0.0) {
        return Err(invalid("logT", format!("must be > 0, got {log_t}")));
    }
    let derivs = zeta_derivs(s, q.degree(), ctx)?;
    Ok(apply_q(q, log_t, &derivs))
}

pub(crate) fn apply_q(q: &Polynomial, log_t: f64, derivs: &[Complex64]) -> Complex64 {
    let mut scale = 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, d) in derivs.iter().enumerate().take(q.degree() + 1) {
        acc += q.coeff(j) * scale * d;
        scale *= -1.0 / log_t;
    }
    acc
}

/// `mu(n)` for `0 <= n <= limit` by a linear sieve; index 0 holds 0.
pub fn mobius_sieve(limit: usize) -> Result<Vec<i8>> {
    if limit < 1 {
        return Err(invalid("limit", "must be >= 1"));
    }
    let mut mu = vec![0i8; limit + 1];
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    mu[1] = 1;
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > limit {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(mu)
}

/// Mollifier parameters: `psi(s) = sum_{h <= M} mu(h) h^{-(s + 1/2 - sigma0)}
/// P(log(M/h) / log M)` with `sigma0 = 1/2 - R/L`.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifierSpec {
    pub p: Polynomial,
    pub m: usize,
    /// The `R` in `sigma0 = 1/2 - R/L`.
    pub sigma0_offset: f64,
    pub log_t: f64,
}

impl MollifierSpec {
    pub fn sigma0(&self) -> f64 {
        0.5 - self.sigma0_offset / self.log_t
    }
}

/// A mollifier with its coefficients `mu(h) P(log(M/h)/log M)` precomputed.
#[derive(Debug, Clone)]
pub struct Mollifier {
    spec: MollifierSpec,
    /// `(log h, mu(h) P(log(M/h)/log M))` for the nonzero terms.
    terms: Vec<(f64, f64)>,
}

impl Mollifier {
    pub fn new(spec: MollifierSpec) -> Result<Self> {
        if spec.m < 2 {
            return Err(invalid("M", format!("must be >= 2, got {}", spec.m)));
        }
        if !(spec.log_t > 0.0) {
            return Err(invalid("logT", "must be > 0"));
        }
        check_mollifier_poly(&spec.p)?;
        let mu = mobius_sieve(spec.m)?;
        let log_m = (spec.m as f64).ln();
        let terms = (1..=spec.m)
            .filter(|&h| mu[h] != 0)
            .filter_map(|h| {
                let lh = (h as f64).ln();
                let c = mu[h] as f64 * spec.p.eval((log_m - lh) / log_m);
                (c != 0.0).then_some((lh, c))
            })
            .collect();
        Ok(Self { spec, terms })
    }

    pub fn spec(&self) -> &MollifierSpec {
        &self.spec
    }

    /// `(log h, coefficient)` pairs of the nonzero terms.
    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let shift = s + 0.5 - self.spec.sigma0();
        self.terms
            .iter()
            .map(|&(lh, c)| c * (-shift * lh).exp())
            .sum()
    }
}

pub fn psi_eval(s: Complex64, spec: &MollifierSpec) -> Result<Complex64> {
    Ok(Mollifier::new(spec.clone())?.eval(s))
}
