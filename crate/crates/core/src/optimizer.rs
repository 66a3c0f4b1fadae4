//! Mollifier optimisation.
//!
//! With `Q` fixed, `c(P, Q, R, theta) - 1` is a positive semidefinite
//! quadratic form in the coefficients of `P`, and symmetrically in `Q` with
//! `P` fixed. Each subproblem is an equality-constrained quadratic program
//! solved through its KKT system; the two are alternated and the outer
//! search over `R` maximises `1 - log(c)/R`.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::mainterm::{check_theta, derivative_kernel, kappa_bound};
use crate::poly::{BivariatePolynomial, Polynomial};

/// Relative pivot size below which a KKT system is treated as singular.
const SINGULAR_TOL: f64 = 1e-13;

/// `A[j][l] = int int e^{2Rv} phi_j phi_l` for the linear pieces `phi_j` of
/// the inner derivative, so that `c = 1 + x^T A x / theta`.
fn gram(pieces: &[BivariatePolynomial], r: f64) -> DMatrix<f64> {
    let n = pieces.len();
    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        for l in j..n {
            let v = (&pieces[j] * &pieces[l]).integrate_unit_square_weighted(r);
            a[(j, l)] = v;
            a[(l, j)] = v;
        }
    }
    a
}

/// Quadratic form of `c - 1` (times `theta`) in the coefficients of `P`,
/// for polynomials of degree at most `deg_p`.
pub fn p_quadratic_form(q: &Polynomial, r: f64, theta: f64, deg_p: usize) -> DMatrix<f64> {
    let pieces: Vec<_> = (0..=deg_p)
        .map(|j| derivative_kernel(&Polynomial::monomial(j), q, r, theta))
        .collect();
    gram(&pieces, r)
}

/// Quadratic form of `c - 1` (times `theta`) in the coefficients of `Q`.
pub fn q_quadratic_form(p: &Polynomial, r: f64, theta: f64, deg_q: usize) -> DMatrix<f64> {
    let pieces: Vec<_> = (0..=deg_q)
        .map(|k| derivative_kernel(p, &Polynomial::monomial(k), r, theta))
        .collect();
    gram(&pieces, r)
}

/// Solution of one constrained quadratic subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct Subproblem {
    pub poly: Polynomial,
    /// Main term at the minimiser.
    pub c: f64,
    /// The KKT system was singular; `poly` is the minimum-norm solution.
    pub degenerate: bool,
}

/// Minimise `x^T A x` subject to `C x = d`.
fn solve_constrained(a: &DMatrix<f64>, c: &DMatrix<f64>, d: &DVector<f64>) -> (DVector<f64>, bool) {
    let n = a.nrows();
    let m = c.nrows();
    let mut kkt = DMatrix::zeros(n + m, n + m);
    kkt.view_mut((0, 0), (n, n)).copy_from(&(a * 2.0));
    kkt.view_mut((0, n), (n, m)).copy_from(&c.transpose());
    kkt.view_mut((n, 0), (m, n)).copy_from(c);
    let mut rhs = DVector::zeros(n + m);
    rhs.rows_mut(n, m).copy_from(d);

    let scale = kkt.amax().max(1.0);
    let lu = kkt.clone().lu();
    let u = lu.u();
    let min_pivot = (0..n + m).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    if min_pivot > SINGULAR_TOL * scale {
        if let Some(sol) = lu.solve(&rhs) {
            return (sol.rows(0, n).into_owned(), false);
        }
    }
    let svd = kkt.svd(true, true);
    let sol = svd
        .solve(&rhs, SINGULAR_TOL * scale)
        .expect("SVD computed with both factors");
    (sol.rows(0, n).into_owned(), true)
}

fn quadratic_value(a: &DMatrix<f64>, x: &DVector<f64>, theta: f64) -> f64 {
    1.0 + x.dot(&(a * x)) / theta
}

/// Best `P` of degree `<= deg_p` with `P(0) = 0`, `P(1) = 1`, `Q` fixed.
pub fn optimize_p_given_q(q: &Polynomial, r: f64, theta: f64, deg_p: usize) -> Result<Subproblem> {
    if deg_p < 1 {
        return Err(invalid("degP", "P(0) = 0 and P(1) = 1 need degree >= 1"));
    }
    check_theta(theta)?;
    let a = p_quadratic_form(q, r, theta, deg_p);
    let n = deg_p + 1;
    let mut c = DMatrix::zeros(2, n);
    c[(0, 0)] = 1.0;
    c.row_mut(1).fill(1.0);
    let d = DVector::from_vec(vec![0.0, 1.0]);
    let (mut x, degenerate) = solve_constrained(&a, &c, &d);
    x[0] = 0.0;
    Ok(Subproblem {
        c: quadratic_value(&a, &x, theta),
        poly: Polynomial::new(x.iter().copied().collect()),
        degenerate,
    })
}

/// Best `Q` of degree `<= deg_q` with `Q(0) = 1`, `P` fixed.
pub fn optimize_q_given_p(p: &Polynomial, r: f64, theta: f64, deg_q: usize) -> Result<Subproblem> {
    check_theta(theta)?;
    let a = q_quadratic_form(p, r, theta, deg_q);
    let n = deg_q + 1;
    let mut c = DMatrix::zeros(1, n);
    c[(0, 0)] = 1.0;
    let d = DVector::from_vec(vec![1.0]);
    let (mut x, degenerate) = solve_constrained(&a, &c, &d);
    x[0] = 1.0;
    Ok(Subproblem {
        c: quadratic_value(&a, &x, theta),
        poly: Polynomial::new(x.iter().copied().collect()),
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeSpec {
    pub deg_p: usize,
    pub deg_q: usize,
    pub theta: f64,
    pub r_range: (f64, f64),
    pub max_alt_iters: usize,
    pub tol: f64,
    /// Size of the coarse `R` grid preceding golden-section refinement.
    pub grid_points: usize,
}

impl Default for OptimizeSpec {
    fn default() -> Self {
        Self {
            deg_p: 1,
            deg_q: 1,
            theta: 0.5,
            r_range: (0.5, 3.0),
            max_alt_iters: 50,
            tol: 1e-12,
            grid_points: 200,
        }
    }
}

impl OptimizeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.deg_p < 1 {
            return Err(invalid("degP", "must be >= 1"));
        }
        check_theta(self.theta)?;
        let (lo, hi) = self.r_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(invalid("R_range", format!("need 0 < lo <= hi, got [{lo}, {hi}]")));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tol", "must be > 0"));
        }
        if self.max_alt_iters == 0 {
            return Err(invalid("max_alt_iters", "must be >= 1"));
        }
        if self.grid_points == 0 {
            return Err(invalid("grid_points", "must be >= 1"));
        }
        Ok(())
    }
}

/// One `(R, c, kappa)` evaluation of the outer search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSample {
    pub r: f64,
    pub c: f64,
    pub kappa: f64,
}

/// Result of coordinate descent at a fixed `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingRun {
    pub p: Polynomial,
    pub q: Polynomial,
    pub c: f64,
    /// `c` at the start and after every accepted half-step.
    pub c_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub p_opt: Polynomial,
    pub q_opt: Polynomial,
    pub r_opt: f64,
    pub c_opt: f64,
    pub kappa_opt: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Some subproblem at `r_opt` fell back to a minimum-norm solution.
    pub degenerate: bool,
    /// Coordinate-descent trace at `r_opt`.
    pub c_trace: Vec<f64>,
    /// Outer search samples: the grid in ascending `R`, then refinements.
    pub r_trace: Vec<RSample>,
}

fn initial_pair(deg_p: usize, deg_q: usize) -> (Polynomial, Polynomial) {
    let p = Polynomial::monomial(1);
    let q = if deg_q >= 1 {
        Polynomial::new(vec![1.0, -1.0])
    } else {
        Polynomial::constant(1.0)
    };
    debug_assert!(deg_p >= 1);
    (p, q)
}

fn c_of(p: &Polynomial, q: &Polynomial, r: f64, theta: f64) -> f64 {
    let g = derivative_kernel(p, q, r, theta);
    1.0 + (&g * &g).integrate_unit_square_weighted(r) / theta
}

/// Alternate the two exact subproblem solves from `P = x`, `Q = 1 - x`
/// (or `Q = 1` when `deg_q = 0`) until `c` moves by less than `tol`.
pub fn alternate(
    deg_p: usize,
    deg_q: usize,
    r: f64,
    theta: f64,
    max_iters: usize,
    tol: f64,
) -> Result<AlternatingRun> {
    if deg_p < 1 {
        return Err(invalid("degP", "must be >= 1"));
    }
    let (mut p, mut q) = initial_pair(deg_p, deg_q);
    let mut c = c_of(&p, &q, r, theta);
    let mut trace = vec![c];
    let mut degenerate = false;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let start = c;
        let sp = optimize_p_given_q(&q, r, theta, deg_p)?;
        degenerate |= sp.degenerate;
        if sp.c <= c {
            p = sp.poly;
            c = sp.c;
        }
        trace.push(c);
        let sq = optimize_q_given_p(&p, r, theta, deg_q)?;
        degenerate |= sq.degenerate;
        if sq.c <= c {
            q = sq.poly;
            c = sq.c;
        }
        trace.push(c);
        if (start - c).abs() < tol {
            converged = true;
            break;
        }
    }
    Ok(AlternatingRun {
        p,
        q,
        c,
        c_trace: trace,
        iterations,
        converged,
        degenerate,
    })
}

fn sample(spec: &OptimizeSpec, r: f64) -> Result<(RSample, AlternatingRun)> {
    let run = alternate(spec.deg_p, spec.deg_q, r, spec.theta, spec.max_alt_iters, spec.tol)?;
    let kappa = kappa_bound(r, run.c)?;
    Ok((RSample { r, c: run.c, kappa }, run))
}

/// Grid over `R`, golden-section refinement around the best grid point,
/// and coordinate descent in `(P, Q)` at every candidate `R`.
pub fn optimize_alternating(spec: &OptimizeSpec) -> Result<OptimizeResult> {
    spec.validate()?;
    let (lo, hi) = spec.r_range;
    let grid: Vec<f64> = if hi == lo || spec.grid_points == 1 {
        vec![lo]
    } else {
        let n = spec.grid_points;
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    };

    let evaluated = evaluate_grid(spec, &grid)?;
    let mut r_trace: Vec<RSample> = evaluated.iter().map(|(s, _)| *s).collect();
    let best_idx = r_trace
        .iter()
        .enumerate()
        .fold(0, |best, (i, s)| if s.kappa > r_trace[best].kappa { i } else { best });
    let (mut best, mut best_run) = evaluated[best_idx].clone();

    if grid.len() > 2 {
        let mut a = grid[best_idx.saturating_sub(1)];
        let mut b = grid[(best_idx + 1).min(grid.len() - 1)];
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let (mut s1, mut run1) = sample(spec, x1)?;
        let (mut s2, mut run2) = sample(spec, x2)?;
        r_trace.push(s1);
        r_trace.push(s2);
        for _ in 0..60 {
            if b - a < 1e-7 {
                break;
            }
            if s1.kappa > s2.kappa {
                b = x2;
                x2 = x1;
                (s2, run2) = (s1, run1.clone());
                x1 = b - inv_phi * (b - a);
                (s1, run1) = sample(spec, x1)?;
                r_trace.push(s1);
            } else {
                a = x1;
                x1 = x2;
                (s1, run1) = (s2, run2.clone());
                x2 = a + inv_phi * (b - a);
                (s2, run2) = sample(spec, x2)?;
                r_trace.push(s2);
            }
        }
        for (s, run) in [(s1, run1), (s2, run2)] {
            if s.kappa > best.kappa {
                best = s;
                best_run = run;
            }
        }
    }

    Ok(OptimizeResult {
        p_opt: best_run.p,
        q_opt: best_run.q,
        r_opt: best.r,
        c_opt: best.c,
        kappa_opt: best.kappa,
        iterations: best_run.iterations,
        converged: best_run.converged,
        degenerate: best_run.degenerate,
        c_trace: best_run.c_trace,
        r_trace,
    })
}

#[cfg(feature = "parallel")]
fn evaluate_grid(spec: &OptimizeSpec, grid: &[f64]) -> Result<Vec<(RSample, AlternatingRun)>> {
    use rayon::prelude::*;
    grid.par_iter().map(|&r| sample(spec, r)).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_grid(spec: &OptimizeSpec, grid: &[f64]) -> Result<Vec<(RSample, AlternatingRun)>> {
    grid.iter().map(|&r| sample(spec, r)).collect()
}
