use std::path::PathBuf;
use std::time::Instant;

use levinson::afe::{afe_compare, arith_factor_check, AfeShifts};
use levinson::mainterm::q_operator_path;
use levinson::moment::{run_moment, MomentMode, PanelRecord};
use levinson::optimizer::{optimize_alternating, OptimizeSpec};
use levinson::zeta::ZetaContext;
use levinson::{
    c1_derivative_form, c1_integral_form, main_term_closed, main_term_quadrature, MainTermParams,
    ShiftPair,
};
use num_complex::Complex64;

use crate::config::{moment_config, AfeArgs, ArithArgs, MaintermArgs, ModeArg, MomentArgs, OptimizeArgs};
use crate::{Command, RunConfig, EXIT_ACCEPTANCE, OUT_DIR_ENV};

pub type RunError = Box<dyn std::error::Error + Send + Sync>;

/// Text produced by a command and the status to exit with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
    /// Notes for stderr.
    pub warnings: Vec<String>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            output,
            exit_code: 0,
            warnings: Vec::new(),
        }
    }
}

pub(crate) fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn optimize_spec(a: &OptimizeArgs) -> OptimizeSpec {
    OptimizeSpec {
        deg_p: a.deg_p,
        deg_q: a.deg_q,
        theta: a.theta,
        r_range: (a.r_min, a.r_max),
        max_alt_iters: a.max_iters,
        tol: a.tol,
        grid_points: a.grid,
    }
}

/// Where the output of `cfg` goes: `--out`, else `$LEVINSON_OUT_DIR`, else stdout.
pub fn output_target(cfg: &RunConfig) -> Option<PathBuf> {
    cfg.output_path.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| {
            let ext = match &cfg.command {
                Command::Reproduce(r) if r.json => "json",
                Command::Reproduce(_) => "txt",
                _ => "csv",
            };
            PathBuf::from(dir).join(format!("{}.{ext}", cfg.command.name()))
        })
    })
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, RunError> {
    match &cfg.command {
        Command::Mainterm(a) => mainterm(a, cfg.seed),
        Command::Optimize(a) => optimize(a, cfg.seed),
        Command::Moment(a) => moment(a, cfg.seed),
        Command::VerifyAfe(a) => verify_afe(a, cfg.seed),
        Command::VerifyArith(a) => verify_arith(a, cfg.seed),
        Command::Reproduce(a) => crate::reproduce::run(a, cfg.seed),
    }
}

/// Identity residuals that depend only on `P`, `Q`, `R`, `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    pub quadrature: f64,
    pub c1_symmetry: f64,
    pub c1_forms: f64,
    pub q_path: f64,
}

pub fn identity_residuals(params: &MainTermParams, nodes: usize) -> Result<IdentityResiduals, levinson::Error> {
    let closed = main_term_closed(params)?.c_value;
    let quad = main_term_quadrature(params, nodes)?.c_value;
    let log_t = 1e4f64.ln();
    let shifts = ShiftPair::scaled(
        Complex64::new(0.7, 0.3),
        Complex64::new(-0.2, 0.5),
        log_t,
        params.theta,
    )?;
    let c1 = c1_integral_form(&shifts, &params.p)?;
    let c1_refl = c1_integral_form(&shifts.reflected(), &params.p)?;
    let c1_alt = c1_derivative_form(&shifts, &params.p)?;
    let path = q_operator_path(params, log_t, 32)?;
    Ok(IdentityResiduals {
        quadrature: (closed - quad).abs() / closed,
        c1_symmetry: (c1 + c1_refl - 1.0).norm(),
        c1_forms: (c1 - c1_alt).norm(),
        q_path: (path - closed).norm() / closed,
    })
}

fn theta_warning(theta: f64) -> Vec<String> {
    if theta >= 0.5 {
        vec!["warning: theta = 1/2 sits on the boundary of the admissible range".into()]
    } else {
        Vec::new()
    }
}

fn mainterm(a: &MaintermArgs, seed: u64) -> Result<Outcome, RunError> {
    let params = MainTermParams::new(a.p.clone(), a.q.clone(), a.r, a.theta)?;
    let closed = main_term_closed(&params)?;
    let quad = main_term_quadrature(&params, a.nodes)?;
    let res = identity_residuals(&params, a.nodes)?;
    let header = [
        "seed",
        "P",
        "Q",
        "R",
        "theta",
        "c_closed",
        "c_quadrature",
        "kappa_bound",
        "quadrature_residual",
        "c1_symmetry_residual",
        "c1_forms_residual",
        "q_path_residual",
    ];
    let row = vec![
        seed.to_string(),
        params.p.to_string(),
        params.q.to_string(),
        num(params.r),
        num(params.theta),
        num(closed.c_value),
        num(quad.c_value),
        closed.kappa_bound.map_or_else(|| "NA".into(), num),
        num(res.quadrature),
        num(res.c1_symmetry),
        num(res.c1_forms),
        num(res.q_path),
    ];
    let mut out = Outcome::ok(csv_string(&header, &[row]));
    out.warnings = theta_warning(params.theta);
    Ok(out)
}

fn optimize(a: &OptimizeArgs, seed: u64) -> Result<Outcome, RunError> {
    let res = optimize_alternating(&optimize_spec(a))?;
    let header = ["seed", "kind", "R", "c", "kappa", "P", "Q"];
    let mut rows: Vec<Vec<String>> = res
        .r_trace
        .iter()
        .map(|s| {
            vec![
                seed.to_string(),
                "trace".into(),
                num(s.r),
                num(s.c),
                num(s.kappa),
                String::new(),
                String::new(),
            ]
        })
        .collect();
    rows.push(vec![
        seed.to_string(),
        "final".into(),
        num(res.r_opt),
        num(res.c_opt),
        num(res.kappa_opt),
        res.p_opt.to_string(),
        res.q_opt.to_string(),
    ]);
    let mut out = Outcome::ok(csv_string(&header, &rows));
    out.warnings = theta_warning(a.theta);
    if !res.converged {
        out.warnings.push("warning: alternating descent hit max-iters before converging".into());
    }
    if res.degenerate {
        out.warnings.push("warning: a singular subproblem was solved by minimum norm".into());
    }
    Ok(out)
}

pub fn panel_csv(panels: &[PanelRecord]) -> String {
    let rows: Vec<Vec<String>> = panels
        .iter()
        .map(|p| vec![num(p.t_lo), num(p.t_hi), num(p.value)])
        .collect();
    csv_string(&["t_lo", "t_hi", "value"], &rows)
}

fn moment(a: &MomentArgs, seed: u64) -> Result<Outcome, RunError> {
    let cfg = moment_config(a)?;
    let mode = match a.mode {
        ModeArg::Smoothed => MomentMode::Smoothed,
        ModeArg::Sharp => MomentMode::Sharp,
    };
    let start = Instant::now();
    let rep = run_moment(&cfg, mode, a.check_step)?;
    let elapsed = start.elapsed().as_secs_f64();
    if let Some(path) = &a.dump {
        std::fs::write(path, panel_csv(&rep.panels))?;
    }
    let header = [
        "seed",
        "mode",
        "T",
        "M",
        "sigma0",
        "moment",
        "main_term",
        "ratio",
        "runtime_seconds",
    ];
    let row = vec![
        seed.to_string(),
        match mode {
            MomentMode::Smoothed => "smoothed".into(),
            MomentMode::Sharp => "sharp".into(),
        },
        num(rep.t_big),
        rep.m.to_string(),
        num(rep.sigma0),
        num(rep.moment),
        num(rep.main_term),
        num(rep.ratio),
        if a.no_timing { "NA".into() } else { num(elapsed) },
    ];
    let mut out = Outcome::ok(csv_string(&header, &[row]));
    out.warnings = theta_warning(a.theta);
    Ok(out)
}

fn verify_afe(a: &AfeArgs, seed: u64) -> Result<Outcome, RunError> {
    let shifts = AfeShifts::real(a.alpha, a.beta)?;
    let ctx = ZetaContext::for_height(a.t);
    let cmp = afe_compare(a.t, &shifts, a.truncation, &ctx)?;
    let header = [
        "seed", "t", "alpha", "beta", "truncation", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
        "residual",
    ];
    let row = vec![
        seed.to_string(),
        num(a.t),
        num(a.alpha),
        num(a.beta),
        a.truncation.to_string(),
        num(cmp.lhs.re),
        num(cmp.lhs.im),
        num(cmp.rhs.re),
        num(cmp.rhs.im),
        num(cmp.residual()),
    ];
    Ok(Outcome::ok(csv_string(&header, &[row])))
}

fn verify_arith(a: &ArithArgs, seed: u64) -> Result<Outcome, RunError> {
    let value = arith_factor_check(a.s_re, a.cap)?;
    let header = ["seed", "cap", "s_re", "value", "residual"];
    let row = vec![
        seed.to_string(),
        a.cap.to_string(),
        num(a.s_re),
        num(value),
        num((value - 1.0).abs()),
    ];
    let mut out = Outcome::ok(csv_string(&header, &[row]));
    if (value - 1.0).abs() > 1e-12 {
        out.exit_code = EXIT_ACCEPTANCE;
    }
    Ok(out)
}
