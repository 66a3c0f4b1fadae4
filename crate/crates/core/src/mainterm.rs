//! The main term `c(P, Q, R, theta)` of the mollified second moment, the
//! shifted main terms `c(alpha, beta)` and `c_1(alpha, beta)`, and the
//! differential-operator route connecting them.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::poly::{BivariatePolynomial, Polynomial};
use crate::quad::GaussLegendre;

/// Tolerance for the normalisations `P(0) = 0`, `P(1) = 1`, `Q(0) = 1`.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// The argument list of `c(P, Q, R, theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermParams {
    pub p: Polynomial,
    pub q: Polynomial,
    pub r: f64,
    pub theta: f64,
}

impl MainTermParams {
    /// Validates `P(0) = 0`, `P(1) = 1`, `Q(0) = 1`, `R >= 0` and
    /// `0 < theta <= 1/2`.
    pub fn new(p: Polynomial, q: Polynomial, r: f64, theta: f64) -> Result<Self> {
        check_mollifier_poly(&p)?;
        if (q.eval(0.0) - 1.0).abs() > CONSTRAINT_TOL {
            return Err(Error::Constraint(format!("Q(0) = {} != 1", q.eval(0.0))));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(invalid("R", format!("must be finite and >= 0, got {r}")));
        }
        check_theta(theta)?;
        Ok(Self { p, q, r, theta })
    }

    /// Levinson's choice: `P = x`, `Q = 1 - x`, `R = 1.3`, `theta = 1/2`.
    pub fn levinson() -> Self {
        Self {
            p: Polynomial::new(vec![0.0, 1.0]),
            q: Polynomial::new(vec![1.0, -1.0]),
            r: 1.3,
            theta: 0.5,
        }
    }

    /// `theta = 1/2` sits on the closed end of the admissible range.
    pub fn theta_at_boundary(&self) -> bool {
        self.theta >= 0.5
    }
}

pub(crate) fn check_mollifier_poly(p: &Polynomial) -> Result<()> {
    if p.eval(0.0).abs() > CONSTRAINT_TOL {
        return Err(Error::Constraint(format!("P(0) = {} != 0", p.eval(0.0))));
    }
    if (p.eval(1.0) - 1.0).abs() > CONSTRAINT_TOL {
        return Err(Error::Constraint(format!("P(1) = {} != 1", p.eval(1.0))));
    }
    Ok(())
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 0.5) {
        return Err(invalid("theta", format!("must lie in (0, 1/2], got {theta}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainTermResult {
    pub c_value: f64,
    /// `None` when `R = 0`, where the bound is undefined.
    pub kappa_bound: Option<f64>,
    pub method: Method,
}

impl MainTermResult {
    fn new(c_value: f64, r: f64, method: Method) -> Self {
        Self {
            c_value,
            kappa_bound: kappa_bound(r, c_value).ok(),
            method,
        }
    }
}

/// `g(u, v) = d/dx [e^{R theta x} P(x + u) Q(v + theta x)]` at `x = 0`,
/// i.e. `R theta P(u) Q(v) + P'(u) Q(v) + theta P(u) Q'(v)`.
pub fn inner_derivative(params: &MainTermParams) -> BivariatePolynomial {
    derivative_kernel(&params.p, &params.q, params.r, params.theta)
}

/// [`inner_derivative`] without the normalisation checks; linear in `p`
/// and in `q` separately.
pub(crate) fn derivative_kernel(
    p: &Polynomial,
    q: &Polynomial,
    r: f64,
    theta: f64,
) -> BivariatePolynomial {
    let p_shift = p.shift(1.0);
    let q_shift = q.shift(theta);
    // row 0 of a shift is the polynomial itself, row 1 is the x-derivative
    let (p0, p1) = (p_shift.row(0), p_shift.row(1));
    let (q0, q1) = (q_shift.row(0), q_shift.row(1));
    let a = BivariatePolynomial::outer(&p0, &q0).scale(r * theta);
    let b = BivariatePolynomial::outer(&p1, &q0);
    let c = BivariatePolynomial::outer(&p0, &q1);
    &(&a + &b) + &c
}

/// `c(P, Q, R, theta) = 1 + (1/theta) int int e^{2Rv} g(u, v)^2 du dv`,
/// integrated exactly through the exponential moments.
pub fn main_term_closed(params: &MainTermParams) -> Result<MainTermResult> {
    check_theta(params.theta)?;
    let g = inner_derivative(params);
    let integral = (&g * &g).integrate_unit_square_weighted(params.r);
    Ok(MainTermResult::new(
        1.0 + integral / params.theta,
        params.r,
        Method::ClosedForm,
    ))
}

/// Tensor Gauss–Legendre evaluation of the same double integral.
///
/// The inner x-derivative is taken by a complex step on the defining
/// product rather than through [`inner_derivative`].
pub fn main_term_quadrature(params: &MainTermParams, n_nodes: usize) -> Result<MainTermResult> {
    check_theta(params.theta)?;
    if n_nodes < 2 {
        return Err(invalid("n_nodes", format!("need at least 2, got {n_nodes}")));
    }
    let MainTermParams { p, q, r, theta } = params;
    let gl = GaussLegendre::new(n_nodes);
    let nodes: Vec<(f64, f64)> = gl.mapped(0.0, 1.0).collect();
    const STEP: f64 = 1e-30;
    let h = Complex64::new(0.0, STEP);
    let mut total = 0.0;
    for &(v, wv) in &nodes {
        let weight_v = wv * (2.0 * r * v).exp();
        let q_at = q.eval_complex(v + h * theta);
        let lead = (h * (r * theta)).exp() * q_at;
        let mut inner = 0.0;
        for &(u, wu) in &nodes {
            let g = (lead * p.eval_complex(h + u)).im / STEP;
            inner += wu * g * g;
        }
        total += weight_v * inner;
    }
    Ok(MainTermResult::new(
        1.0 + total / theta,
        *r,
        Method::Quadrature,
    ))
}

/// `kappa >= 1 - log(c) / R`.
pub fn kappa_bound(r: f64, c: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid("R", format!("must be > 0, got {r}")));
    }
    if !(c >= 1.0) {
        return Err(invalid("c", format!("the main term is at least 1, got {c}")));
    }
    Ok(1.0 - c.ln() / r)
}

/// Shifts `alpha`, `beta` together with `L = log T` and `log M = theta L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftPair {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub log_t: f64,
    pub log_m: f64,
}

impl ShiftPair {
    pub fn new(alpha: Complex64, beta: Complex64, log_t: f64, theta: f64) -> Result<Self> {
        if !(log_t > 0.0) {
            return Err(invalid("logT", format!("must be > 0, got {log_t}")));
        }
        check_theta(theta)?;
        Ok(Self {
            alpha,
            beta,
            log_t,
            log_m: theta * log_t,
        })
    }

    /// Shifts given in units of `1/L`: `alpha = a / L`, `beta = b / L`.
    pub fn scaled(a: Complex64, b: Complex64, log_t: f64, theta: f64) -> Result<Self> {
        Self::new(a / log_t, b / log_t, log_t, theta)
    }

    pub fn theta(&self) -> f64 {
        self.log_m / self.log_t
    }

    /// `(alpha, beta) -> (-beta, -alpha)`.
    pub fn reflected(&self) -> Self {
        Self {
            alpha: -self.beta,
            beta: -self.alpha,
            ..*self
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
            ..*self
        }
    }

    fn sum_nonzero(&self) -> Result<Complex64> {
        let s = self.alpha + self.beta;
        if s.norm() * self.log_t < 1e-14 {
            return Err(Error::Pole(
                "alpha + beta = 0; use the symmetrised combination".into(),
            ));
        }
        Ok(s)
    }
}

/// Coefficients `F_ij` of `x^i y^j` (`i, j <= 1`) in
/// `F(x, y) = int_0^1 P(x + u) P(y + u) du`.
fn shifted_overlap(p: &Polynomial) -> [[f64; 2]; 2] {
    let s = p.shift(1.0);
    let rows = [s.row(0), s.row(1)];
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (&rows[i] * &rows[j]).integral_unit();
        }
    }
    out
}

/// `d^2/dxdy [e^{a x + b y} F(x, y)]` at the origin.
fn mixed_at_origin(f: &[[f64; 2]; 2], a: Complex64, b: Complex64) -> Complex64 {
    a * b * f[0][0] + a * f[0][1] + b * f[1][0] + f[1][1]
}

/// `c_1` through `int_0^1 (P' + alpha log M P)(P' + beta log M P) du`.
pub fn c1_integral_form(shifts: &ShiftPair, p: &Polynomial) -> Result<Complex64> {
    let sum = shifts.sum_nonzero()?;
    let dp = p.derivative();
    let dd = (&dp * &dp).integral_unit();
    let dp_p = (&dp * p).integral_unit();
    let pp = (p * p).integral_unit();
    let a = shifts.alpha * shifts.log_m;
    let b = shifts.beta * shifts.log_m;
    let integral = dd + (a + b) * dp_p + a * b * pp;
    Ok(integral / (sum * shifts.log_m))
}

/// `c_1` through the mixed derivative of
/// `M^{alpha x + beta y} int_0^1 P(x + u) P(y + u) du` at the origin.
pub fn c1_derivative_form(shifts: &ShiftPair, p: &Polynomial) -> Result<Complex64> {
    let sum = shifts.sum_nonzero()?;
    let f = shifted_overlap(p);
    let d = mixed_at_origin(
        &f,
        shifts.alpha * shifts.log_m,
        shifts.beta * shifts.log_m,
    );
    Ok(d / (sum * shifts.log_m))
}

/// `(1 - e^{-z}) / z`, continued by 1 at `z = 0`.
///
/// With `z = (alpha + beta) log T` this is `int_0^1 T^{-v(alpha+beta)} dv`.
pub fn shift_mean(z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        // sum_n (-z)^n / (n+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..30 {
            term *= -z / (n + 1) as f64;
            sum += term;
        }
        sum
    } else {
        (1.0 - (-z).exp()) / z
    }
}

/// `c(alpha, beta) = 1 + (1/theta) d^2/dxdy M^{-beta x - alpha y}
/// int int T^{-v(alpha+beta)} P(x+u) P(y+u) du dv` at `x = y = 0`.
pub fn c_general(shifts: &ShiftPair, p: &Polynomial) -> Complex64 {
    let f = shifted_overlap(p);
    let d = mixed_at_origin(
        &f,
        -shifts.beta * shifts.log_m,
        -shifts.alpha * shifts.log_m,
    );
    let mean = shift_mean((shifts.alpha + shifts.beta) * shifts.log_t);
    1.0 + mean * d / shifts.theta()
}

/// Multiplier of `Q(-(1/log T) d/dalpha)` acting on `X^{-alpha}`:
/// the image is `Q(log X / log T) X^{-alpha}`.
pub fn apply_q_operator(q: &Polynomial, log_t: f64, log_x: f64) -> Result<f64> {
    if !(log_t > 0.0) {
        return Err(invalid("logT", format!("must be > 0, got {log_t}")));
    }
    Ok(q.eval(log_x / log_t))
}

/// Mixed partial derivatives `d^j/da^j d^k/db^k f(a0, b0) * rho^{j+k} / (j! k!)`
/// for `j, k <= order`, from an `nodes x nodes` trapezoidal rule on the
/// torus `|a - a0| = |b - b0| = rho`.
fn cauchy_taylor_2d<F>(
    f: F,
    centre: (Complex64, Complex64),
    rho: f64,
    order: usize,
    nodes: usize,
) -> Vec<Vec<Complex64>>
where
    F: Fn(Complex64, Complex64) -> Complex64,
{
    let roots: Vec<Complex64> = (0..nodes)
        .map(|m| Complex64::from_polar(1.0, std::f64::consts::TAU * m as f64 / nodes as f64))
        .collect();
    let samples: Vec<Vec<Complex64>> = roots
        .iter()
        .map(|wa| {
            roots
                .iter()
                .map(|wb| f(centre.0 + rho * wa, centre.1 + rho * wb))
                .collect()
        })
        .collect();
    let norm = (nodes * nodes) as f64;
    (0..=order)
        .map(|j| {
            (0..=order)
                .map(|k| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (m, row) in samples.iter().enumerate() {
                        for (n, val) in row.iter().enumerate() {
                            acc += val * roots[(j * m) % nodes].conj() * roots[(k * n) % nodes].conj();
                        }
                    }
                    acc / norm
                })
                .collect()
        })
        .collect()
}

/// `Q(-(1/L) d/dalpha) Q(-(1/L) d/dbeta) c(alpha, beta)` at
/// `alpha = beta = -R/L`, with the derivatives taken numerically by
/// Cauchy's formula on circles of radius `1/L`.
///
/// Independent of `L`; it should reproduce [`main_term_closed`].
pub fn q_operator_path(params: &MainTermParams, log_t: f64, nodes: usize) -> Result<Complex64> {
    if nodes < 2 * params.q.degree() + 8 {
        return Err(invalid(
            "nodes",
            format!("need at least {} circle nodes", 2 * params.q.degree() + 8),
        ));
    }
    let theta = params.theta;
    let base = ShiftPair::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), log_t, theta)?;
    let p = &params.p;
    let f = |a: Complex64, b: Complex64| {
        c_general(
            &ShiftPair {
                alpha: a,
                beta: b,
                ..base
            },
            p,
        )
    };
    let centre = Complex64::new(-params.r / log_t, 0.0);
    let order = params.q.degree();
    let rho = 1.0 / log_t;
    let taylor = cauchy_taylor_2d(f, (centre, centre), rho, order, nodes);
    // q_j (-1/L)^j d^j = q_j (-1)^j j! * (Taylor coefficient at radius 1/L)
    let weights: Vec<f64> = (0..=order)
        .map(|j| {
            let fact: f64 = (1..=j).map(|i| i as f64).product();
            params.q.coeff(j) * fact * if j % 2 == 0 { 1.0 } else { -1.0 }
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, wj) in weights.iter().enumerate() {
        for (k, wk) in weights.iter().enumerate() {
            acc += wj * wk * taylor[j][k];
        }
    }
    Ok(acc)
}
