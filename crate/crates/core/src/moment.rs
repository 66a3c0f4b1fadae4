//! Desk-scale evaluation of the mollified second moment
//! `int w(t) |V psi(sigma0 + it)|^2 dt` and its unsmoothed counterpart.

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::mainterm::{main_term_closed, MainTermParams};
use crate::poly::Polynomial;
use crate::quad::GaussLegendre;
use crate::zeta::{apply_q, EulerMaclaurinTail, Mollifier, MollifierSpec, ZetaContext};

/// Gauss–Legendre nodes per t-panel.
pub const PANEL_NODES: usize = 16;
/// Default t-panel width.
pub const DEFAULT_STEP: f64 = 2.0;
/// Largest `T` accepted by the moment runs.
pub const T_MAX: f64 = 2e5;
/// Relative change under step halving above which a run is rejected.
pub const HALVING_TOL: f64 = 5e-3;

/// Panels sharing one set of rotation seeds.
const CHUNK_PANELS: usize = 32;

/// `e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)})`, extended by 0 and 1.
pub fn ramp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowKind {
    /// At least the indicator of `[T/2, T]`.
    Majorant,
    /// At most the indicator of `[T/2, T]`.
    Minorant,
    /// Equal to 1 on `[center - plateau/2, center + plateau/2]`.
    CenteredBump { center: f64, plateau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub t_big: f64,
    /// Width of each transition.
    pub delta: f64,
    pub kind: WindowKind,
}

impl WindowSpec {
    /// Transition width `T / log T`.
    pub fn new(t_big: f64, kind: WindowKind) -> Result<Self> {
        if !(t_big > 1.0) {
            return Err(invalid("T", format!("must be > 1, got {t_big}")));
        }
        Self::with_delta(t_big, t_big / t_big.ln(), kind)
    }

    pub fn with_delta(t_big: f64, delta: f64, kind: WindowKind) -> Result<Self> {
        let spec = Self { t_big, delta, kind };
        spec.validate()?;
        Ok(spec)
    }

    pub fn majorant(t_big: f64) -> Result<Self> {
        Self::new(t_big, WindowKind::Majorant)
    }

    pub fn minorant(t_big: f64) -> Result<Self> {
        Self::new(t_big, WindowKind::Minorant)
    }

    /// The interval where the window equals 1.
    pub fn plateau(&self) -> (f64, f64) {
        let t = self.t_big;
        match self.kind {
            WindowKind::Majorant => (t / 2.0, t),
            WindowKind::Minorant => (t / 2.0 + self.delta, t - self.delta),
            WindowKind::CenteredBump { center, plateau } => {
                (center - plateau / 2.0, center + plateau / 2.0)
            }
        }
    }

    /// The closed interval outside which the window vanishes.
    pub fn support(&self) -> (f64, f64) {
        let (a, b) = self.plateau();
        (a - self.delta, b + self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_big > 1.0 && self.t_big.is_finite()) {
            return Err(invalid("T", format!("must be finite and > 1, got {}", self.t_big)));
        }
        if !(self.delta > 0.0) {
            return Err(invalid("delta", format!("must be > 0, got {}", self.delta)));
        }
        let (a, b) = self.plateau();
        if !(b >= a) {
            return Err(invalid("window", format!("empty plateau [{a}, {b}]")));
        }
        let (lo, hi) = self.support();
        let t = self.t_big;
        if lo < t / 4.0 || hi > 2.0 * t {
            return Err(invalid(
                "window",
                format!("support [{lo}, {hi}] leaves [T/4, 2T] = [{}, {}]", t / 4.0, 2.0 * t),
            ));
        }
        Ok(())
    }
}

/// A smooth window assembled from two [`ramp`]s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    spec: WindowSpec,
    plateau: (f64, f64),
}

/// Measured admissibility data of a window on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub min: f64,
    pub max: f64,
    pub support: (f64, f64),
    /// `max |w^(j)| delta^j` for `j = 1..=4`.
    pub derivative_constants: [f64; 4],
}

impl Admissibility {
    pub fn holds(&self, t_big: f64) -> bool {
        self.min >= 0.0
            && self.max <= 1.0
            && self.support.0 >= t_big / 4.0
            && self.support.1 <= 2.0 * t_big
            && self.derivative_constants.iter().all(|c| c.is_finite())
    }
}

impl Window {
    pub fn new(spec: WindowSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            plateau: spec.plateau(),
            spec,
        })
    }

    pub fn spec(&self) -> &WindowSpec {
        &self.spec
    }

    pub fn support(&self) -> (f64, f64) {
        self.spec.support()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (a, b) = self.plateau;
        let d = self.spec.delta;
        if t < a {
            ramp((t - (a - d)) / d)
        } else if t > b {
            ramp(((b + d) - t) / d)
        } else {
            1.0
        }
    }

    /// Range, support and derivative bounds sampled on `grid` points across
    /// the support (padded by one transition width on each side).
    pub fn admissibility(&self, grid: usize) -> Admissibility {
        let (lo, hi) = self.support();
        let d = self.spec.delta;
        let (a, b) = (lo - d, hi + d);
        let grid = grid.max(16);
        let h = 2e-3 * d;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut nz_lo = f64::INFINITY;
        let mut nz_hi = f64::NEG_INFINITY;
        let mut consts = [0.0f64; 4];
        for k in 0..=grid {
            let t = a + (b - a) * k as f64 / grid as f64;
            let f = |m: f64| self.eval(t + m * h);
            let (m2, m1, c, p1, p2) = (f(-2.0), f(-1.0), f(0.0), f(1.0), f(2.0));
            min = min.min(c);
            max = max.max(c);
            if c > 0.0 {
                nz_lo = nz_lo.min(t);
                nz_hi = nz_hi.max(t);
            }
            let derivs = [
                (p1 - m1) / (2.0 * h),
                (p1 - 2.0 * c + m1) / (h * h),
                (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h),
                (p2 - 4.0 * p1 + 6.0 * c - 4.0 * m1 + m2) / (h * h * h * h),
            ];
            for (j, dv) in derivs.iter().enumerate() {
                consts[j] = consts[j].max(dv.abs() * d.powi(j as i32 + 1));
            }
        }
        Admissibility {
            min,
            max,
            support: (nz_lo, nz_hi),
            derivative_constants: consts,
        }
    }
}

pub fn window_build(spec: WindowSpec) -> Result<Window> {
    Window::new(spec)
}

/// `int w(t) dt` with `panels` Gauss–Legendre panels on each transition.
pub fn w_hat_zero_with(spec: &WindowSpec, panels: usize) -> Result<f64> {
    let w = Window::new(*spec)?;
    let gl = GaussLegendre::new(PANEL_NODES);
    let (lo, hi) = spec.support();
    let (a, b) = spec.plateau();
    let panels = panels.max(1);
    let f = |t: f64| w.eval(t);
    Ok(gl.integrate_composite(lo, a, panels, f)
        + gl.integrate(a, b, f)
        + gl.integrate_composite(b, hi, panels, f))
}

pub fn w_hat_zero(spec: &WindowSpec) -> Result<f64> {
    w_hat_zero_with(spec, 8)
}

/// Parameters of one moment run.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentRunConfig {
    pub t_big: f64,
    pub theta: f64,
    pub r: f64,
    pub p: Polynomial,
    pub q: Polynomial,
    pub window: WindowSpec,
    /// Width of the Gauss–Legendre t-panels.
    pub quad_step: f64,
    /// Fixed zeta context; `None` picks [`ZetaContext::bulk`] per chunk
    /// of panels from its largest height.
    pub ctx: Option<ZetaContext>,
}

impl MomentRunConfig {
    /// Majorant window, default step, adaptive zeta context.
    pub fn new(t_big: f64, theta: f64, r: f64, p: Polynomial, q: Polynomial) -> Result<Self> {
        let cfg = Self {
            window: WindowSpec::majorant(t_big)?,
            t_big,
            theta,
            r,
            p,
            q,
            quad_step: DEFAULT_STEP,
            ctx: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `P = x`, `Q = 1 - x`, `R = 1.3`, `theta = 1/2`.
    pub fn levinson(t_big: f64) -> Result<Self> {
        let lv = MainTermParams::levinson();
        Self::new(t_big, lv.theta, lv.r, lv.p, lv.q)
    }

    pub fn log_t(&self) -> f64 {
        self.t_big.ln()
    }

    /// `round(T^theta)`.
    pub fn m(&self) -> usize {
        self.t_big.powf(self.theta).round() as usize
    }

    pub fn sigma0(&self) -> f64 {
        0.5 - self.r / self.log_t()
    }

    pub fn main_term_params(&self) -> Result<MainTermParams> {
        MainTermParams::new(self.p.clone(), self.q.clone(), self.r, self.theta)
    }

    pub fn main_term(&self) -> Result<f64> {
        Ok(main_term_closed(&self.main_term_params()?)?.c_value)
    }

    pub fn with_step(&self, quad_step: f64) -> Self {
        Self {
            quad_step,
            ..self.clone()
        }
    }

    pub fn with_window(&self, window: WindowSpec) -> Self {
        Self {
            window,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_big > 1.0 && self.t_big <= T_MAX) {
            return Err(invalid("T", format!("must lie in (1, {T_MAX}], got {}", self.t_big)));
        }
        self.main_term_params()?;
        if self.m() < 2 {
            return Err(invalid("M", format!("round(T^theta) = {} must be >= 2", self.m())));
        }
        let s0 = self.sigma0();
        if !(s0 > 0.0 && s0 < 0.5) {
            return Err(invalid("sigma0", format!("1/2 - R/log T = {s0} must lie in (0, 1/2)")));
        }
        if !(self.quad_step > 0.0 && self.quad_step <= DEFAULT_STEP) {
            return Err(invalid(
                "step",
                format!("must lie in (0, {DEFAULT_STEP}], got {}", self.quad_step),
            ));
        }
        self.window.validate()?;
        if (self.window.t_big - self.t_big).abs() > 1e-9 * self.t_big {
            return Err(invalid("window", "window T differs from run T"));
        }
        Ok(())
    }

    fn mollifier(&self) -> Result<Mollifier> {
        Mollifier::new(MollifierSpec {
            p: self.p.clone(),
            m: self.m(),
            sigma0_offset: self.r,
            log_t: self.log_t(),
        })
    }
}

/// Integral over one t-panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelRecord {
    pub t_lo: f64,
    pub t_hi: f64,
    pub value: f64,
}

/// `sum_n a_n e^{-i t log n}` at the nodes of consecutive panels, with
/// per-term rotations advanced by one panel width at a time.
struct DirichletBatch {
    coeffs: Vec<f64>,
    logs: Vec<f64>,
    /// `e^{-i d_j log n}` for node offsets `d_j`, row-major in `n`.
    offsets: Vec<Complex64>,
    /// `e^{-i h log n}`.
    steps: Vec<Complex64>,
}

impl DirichletBatch {
    fn new(coeffs: Vec<f64>, logs: Vec<f64>, node_offsets: &[f64], width: f64) -> Self {
        let mut offsets = Vec::with_capacity(logs.len() * node_offsets.len());
        for &l in &logs {
            offsets.extend(node_offsets.iter().map(|&d| Complex64::from_polar(1.0, -d * l)));
        }
        let steps = logs.iter().map(|&l| Complex64::from_polar(1.0, -width * l)).collect();
        Self {
            coeffs,
            logs,
            offsets,
            steps,
        }
    }

    fn seed(&self, t_center: f64, len: usize) -> Vec<Complex64> {
        self.logs[..len]
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -t_center * l))
            .collect()
    }

    /// Adds the panel sums into `out` and advances `rot` to the next panel.
    fn accumulate(&self, rot: &mut [Complex64], out: &mut [Complex64; PANEL_NODES]) {
        for (n, r) in rot.iter_mut().enumerate() {
            let w = *r * self.coeffs[n];
            let row = &self.offsets[n * PANEL_NODES..(n + 1) * PANEL_NODES];
            for (o, &e) in out.iter_mut().zip(row) {
                *o += w * e;
            }
            *r *= self.steps[n];
        }
    }
}

struct Integrator<'a> {
    cfg: &'a MomentRunConfig,
    a: f64,
    width: f64,
    panels: usize,
    node_offsets: Vec<f64>,
    node_weights: Vec<f64>,
    v_batch: DirichletBatch,
    psi_batch: DirichletBatch,
}

impl<'a> Integrator<'a> {
    fn new(cfg: &'a MomentRunConfig, a: f64, b: f64) -> Result<Self> {
        cfg.validate()?;
        if !(b > a && a > 0.0) {
            return Err(invalid("range", format!("need 0 < a < b, got [{a}, {b}]")));
        }
        let panels = ((b - a) / cfg.quad_step).ceil().max(1.0) as usize;
        let width = (b - a) / panels as f64;
        let gl = GaussLegendre::new(PANEL_NODES);
        let node_offsets: Vec<f64> = gl.nodes().iter().map(|x| 0.5 * width * x).collect();
        let node_weights: Vec<f64> = gl.weights().iter().map(|w| 0.5 * width * w).collect();

        let n_max = match cfg.ctx {
            Some(ctx) => {
                if ctx.t_max < b {
                    return Err(Error::OutOfRange(format!(
                        "zeta context covers heights up to {}, run needs {b}",
                        ctx.t_max
                    )));
                }
                ctx.em_terms
            }
            None => ZetaContext::bulk(b).em_terms,
        };
        let (sigma, log_t) = (cfg.sigma0(), cfg.log_t());
        let logs: Vec<f64> = (1..n_max).map(|n| (n as f64).ln()).collect();
        let coeffs = logs
            .iter()
            .map(|&l| (-sigma * l).exp() * cfg.q.eval(l / log_t))
            .collect();
        let v_batch = DirichletBatch::new(coeffs, logs, &node_offsets, width);

        // psi(sigma0 + it) = sum c_h h^{-1/2 - it}
        let moll = cfg.mollifier()?;
        let (logs, coeffs): (Vec<f64>, Vec<f64>) = moll
            .terms()
            .iter()
            .map(|&(lh, c)| (lh, c * (-0.5 * lh).exp()))
            .unzip();
        let psi_batch = DirichletBatch::new(coeffs, logs, &node_offsets, width);
        Ok(Self {
            cfg,
            a,
            width,
            panels,
            node_offsets,
            node_weights,
            v_batch,
            psi_batch,
        })
    }

    fn chunk(&self, first: usize, weight: &(dyn Fn(f64) -> f64 + Sync)) -> Result<Vec<PanelRecord>> {
        let last = (first + CHUNK_PANELS).min(self.panels);
        let t_hi = self.a + self.width * last as f64;
        let ctx = self.cfg.ctx.unwrap_or_else(|| ZetaContext::bulk(t_hi));
        let n_terms = ctx.em_terms - 1;
        let tail = EulerMaclaurinTail::new(ctx.em_terms, ctx.em_order);
        let t0 = self.a + self.width * (first as f64 + 0.5);
        let mut v_rot = self.v_batch.seed(t0, n_terms);
        let mut psi_rot = self.psi_batch.seed(t0, self.psi_batch.logs.len());
        let (sigma, log_t, q) = (self.cfg.sigma0(), self.cfg.log_t(), &self.cfg.q);
        let mut out = Vec::with_capacity(last - first);
        for p in first..last {
            let t_lo = self.a + self.width * p as f64;
            let t_c = t_lo + 0.5 * self.width;
            let zero = Complex64::new(0.0, 0.0);
            let mut v = [zero; PANEL_NODES];
            let mut psi = [zero; PANEL_NODES];
            self.v_batch.accumulate(&mut v_rot, &mut v);
            self.psi_batch.accumulate(&mut psi_rot, &mut psi);
            let mut value = 0.0;
            for j in 0..PANEL_NODES {
                let t = t_c + self.node_offsets[j];
                let w = weight(t);
                if w == 0.0 {
                    continue;
                }
                let s = Complex64::new(sigma, t);
                let vt = v[j] + apply_q(q, log_t, &tail.derivs(s, q.degree()));
                value += self.node_weights[j] * w * (vt * psi[j]).norm_sqr();
            }
            out.push(PanelRecord {
                t_lo,
                t_hi: t_lo + self.width,
                value,
            });
        }
        Ok(out)
    }

    fn run(&self, weight: &(dyn Fn(f64) -> f64 + Sync)) -> Result<Vec<PanelRecord>> {
        let starts: Vec<usize> = (0..self.panels).step_by(CHUNK_PANELS).collect();
        #[cfg(feature = "parallel")]
        let chunks: Vec<Result<Vec<PanelRecord>>> =
            starts.par_iter().map(|&s| self.chunk(s, weight)).collect();
        #[cfg(not(feature = "parallel"))]
        let chunks: Vec<Result<Vec<PanelRecord>>> =
            starts.iter().map(|&s| self.chunk(s, weight)).collect();
        let mut records = Vec::with_capacity(self.panels);
        for c in chunks {
            records.extend(c?);
        }
        Ok(records)
    }
}

/// Sum in ascending panel order.
pub fn panel_total(records: &[PanelRecord]) -> f64 {
    records.iter().map(|r| r.value).sum()
}

/// Per-panel contributions to `int_a^b weight(t) |V psi(sigma0 + it)|^2 dt`.
pub fn moment_panels(
    cfg: &MomentRunConfig,
    a: f64,
    b: f64,
    weight: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<Vec<PanelRecord>> {
    Integrator::new(cfg, a, b)?.run(weight)
}

/// `int w(t) |V psi(sigma0 + it)|^2 dt` over the window support.
pub fn smoothed_moment(cfg: &MomentRunConfig) -> Result<f64> {
    Ok(panel_total(&smoothed_panels(cfg)?))
}

pub fn smoothed_panels(cfg: &MomentRunConfig) -> Result<Vec<PanelRecord>> {
    let w = Window::new(cfg.window)?;
    let (lo, hi) = w.support();
    moment_panels(cfg, lo, hi, &|t| w.eval(t))
}

/// `int_a^b |V psi(sigma0 + it)|^2 dt`.
pub fn sharp_integral(cfg: &MomentRunConfig, a: f64, b: f64) -> Result<f64> {
    Ok(panel_total(&moment_panels(cfg, a, b, &|_| 1.0)?))
}

/// `(1/T) int_1^T |V psi(sigma0 + it)|^2 dt`.
pub fn sharp_moment(cfg: &MomentRunConfig) -> Result<f64> {
    Ok(panel_total(&sharp_panels(cfg)?) / cfg.t_big)
}

pub fn sharp_panels(cfg: &MomentRunConfig) -> Result<Vec<PanelRecord>> {
    moment_panels(cfg, 1.0, cfg.t_big, &|_| 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMode {
    Smoothed,
    Sharp,
}

/// A moment value against its predicted main term.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub mode: MomentMode,
    pub t_big: f64,
    pub m: usize,
    pub sigma0: f64,
    pub moment: f64,
    /// `c w_hat(0)` for smoothed runs, `c` for sharp runs.
    pub main_term: f64,
    pub ratio: f64,
    /// Relative change when the step is halved, if checked.
    pub halving_change: Option<f64>,
    pub panels: Vec<PanelRecord>,
}

fn mode_value(cfg: &MomentRunConfig, mode: MomentMode) -> Result<(f64, Vec<PanelRecord>)> {
    Ok(match mode {
        MomentMode::Smoothed => {
            let p = smoothed_panels(cfg)?;
            (panel_total(&p), p)
        }
        MomentMode::Sharp => {
            let p = sharp_panels(cfg)?;
            (panel_total(&p) / cfg.t_big, p)
        }
    })
}

/// Runs one moment experiment. With `check_step` the run is repeated at half
/// the step and rejected if the value moves by more than 0.5%.
pub fn run_moment(cfg: &MomentRunConfig, mode: MomentMode, check_step: bool) -> Result<MomentReport> {
    let (moment, panels) = mode_value(cfg, mode)?;
    let c = cfg.main_term()?;
    let main_term = match mode {
        MomentMode::Smoothed => c * w_hat_zero(&cfg.window)?,
        MomentMode::Sharp => c,
    };
    let halving_change = if check_step {
        let (fine, _) = mode_value(&cfg.with_step(cfg.quad_step / 2.0), mode)?;
        let rel = (moment - fine).abs() / fine.abs();
        if rel > HALVING_TOL {
            return Err(Error::Quadrature(format!(
                "halving the step from {} changed the moment by {:.3}%",
                cfg.quad_step,
                100.0 * rel
            )));
        }
        Some(rel)
    } else {
        None
    };
    Ok(MomentReport {
        mode,
        t_big: cfg.t_big,
        m: cfg.m(),
        sigma0: cfg.sigma0(),
        moment,
        main_term,
        ratio: moment / main_term,
        halving_change,
        panels,
    })
}
