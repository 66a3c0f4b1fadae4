use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{ArgAction, CommandFactory, Parser, Subcommand, ValueEnum};
use levinson::moment::{MomentRunConfig, WindowKind, WindowSpec};
use levinson::{MainTermParams, Polynomial};

#[derive(Debug, Parser)]
#[command(name = "levinson", version, about = "Mollified second moment of zeta and the Levinson bound")]
pub struct Cli {
    /// Flat `key = value` file; command-line flags win over its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (defaults to `$LEVINSON_OUT_DIR/<command>.csv`, else stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomised sweeps; written to every CSV row.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the parallel parts.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate c(P, Q, R, theta) in closed form and by quadrature.
    Mainterm(MaintermArgs),
    /// Optimise P, Q and R for the kappa bound.
    Optimize(OptimizeArgs),
    /// Numerically integrate the mollified second moment.
    Moment(MomentArgs),
    /// Compare both sides of the approximate functional equation.
    VerifyAfe(AfeArgs),
    /// Check the diagonal arithmetical-factor identity.
    VerifyArith(ArithArgs),
    /// Reproduce c = 2.35... and kappa >= 0.34... for P = x, Q = 1 - x.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct MaintermArgs {
    #[arg(long = "P", default_value = "0,1")]
    pub p: Polynomial,
    #[arg(long = "Q", default_value = "1,-1")]
    pub q: Polynomial,
    #[arg(long = "R", default_value_t = 1.3)]
    pub r: f64,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    /// Gauss–Legendre nodes per axis for the quadrature value.
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
}

#[derive(Debug, Clone, clap::Args)]
pub struct OptimizeArgs {
    #[arg(long = "degP", default_value_t = 1)]
    pub deg_p: usize,
    #[arg(long = "degQ", default_value_t = 1)]
    pub deg_q: usize,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long = "R-min", default_value_t = 0.5)]
    pub r_min: f64,
    #[arg(long = "R-max", default_value_t = 3.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long = "max-iters", default_value_t = 50)]
    pub max_iters: usize,
    /// Coarse R grid size before golden-section refinement.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Majorant,
    Minorant,
    Bump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Smoothed,
    Sharp,
}

#[derive(Debug, Clone, clap::Args)]
pub struct MomentArgs {
    #[arg(long = "T", default_value_t = 1e4)]
    pub t_big: f64,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long = "R", default_value_t = 1.3)]
    pub r: f64,
    #[arg(long = "P", default_value = "0,1")]
    pub p: Polynomial,
    #[arg(long = "Q", default_value = "1,-1")]
    pub q: Polynomial,
    #[arg(long, value_enum, default_value_t = WindowArg::Majorant)]
    pub window: WindowArg,
    /// Plateau length of the bump window, as a fraction of T.
    #[arg(long, default_value_t = 0.25)]
    pub plateau: f64,
    /// Width of the Gauss–Legendre t-panels.
    #[arg(long, default_value_t = 2.0)]
    pub step: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Smoothed)]
    pub mode: ModeArg,
    /// Repeat at half the step and fail if the value moves by > 0.5%.
    #[arg(long = "check-step")]
    pub check_step: bool,
    /// Write NA in the runtime column so output is byte-reproducible.
    #[arg(long = "no-timing")]
    pub no_timing: bool,
    /// Per-panel CSV for convergence plots.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct AfeArgs {
    #[arg(long, default_value_t = 100.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub beta: f64,
    #[arg(long, default_value_t = 100_000)]
    pub truncation: usize,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ArithArgs {
    #[arg(long, default_value_t = 10_000)]
    pub cap: usize,
    #[arg(long = "s_re", default_value_t = 0.5)]
    pub s_re: f64,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ReproduceArgs {
    /// Also run the identity suites and require every residual < 1e-9.
    #[arg(long = "check-identities")]
    pub check_identities: bool,
    /// Machine-readable report.
    #[arg(long)]
    pub json: bool,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mainterm(_) => "mainterm",
            Command::Optimize(_) => "optimize",
            Command::Moment(_) => "moment",
            Command::VerifyAfe(_) => "verify-afe",
            Command::VerifyArith(_) => "verify-arith",
            Command::Reproduce(_) => "reproduce",
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
    pub threads: Option<usize>,
}

#[derive(Debug)]
pub enum UsageError {
    /// Rejected by the argument parser (also covers `--help`).
    Clap(clap::Error),
    Invalid(String),
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UsageError::Clap(e) => write!(f, "{e}"),
            UsageError::Invalid(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for UsageError {}

fn invalid(msg: impl Into<String>) -> UsageError {
    UsageError::Invalid(msg.into())
}

/// `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            invalid(format!("{}:{}: expected `key = value`", path.display(), i + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(invalid(format!("{}:{}: empty key", path.display(), i + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn find_config_flag(argv: &[String]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn flag_present(argv: &[String], key: &str) -> bool {
    let long = format!("--{key}");
    let prefixed = format!("--{key}=");
    argv.iter().any(|a| a == &long || a.starts_with(&prefixed))
}

/// Folds config-file entries into `argv` as flags (unless the flag is
/// already given) and rejects keys the subcommand does not know.
fn merge_file(argv: &[String], entries: &[(String, String)]) -> Result<Vec<String>, UsageError> {
    let cmd = Cli::command();
    let sub_pos = argv
        .iter()
        .position(|a| cmd.get_subcommands().any(|s| s.get_name() == a))
        .ok_or_else(|| invalid("a subcommand is required before config entries can apply"))?;
    let sub = cmd
        .find_subcommand(&argv[sub_pos])
        .expect("position found by name");
    let mut known = BTreeSet::new();
    let mut switches = BTreeSet::new();
    for arg in cmd.get_arguments().chain(sub.get_arguments()) {
        if let Some(long) = arg.get_long() {
            known.insert(long.to_string());
            if matches!(arg.get_action(), ArgAction::SetTrue) {
                switches.insert(long.to_string());
            }
        }
    }
    known.remove("config");
    let mut extra = Vec::new();
    for (k, v) in entries {
        if !known.contains(k) {
            return Err(invalid(format!(
                "unknown key `{k}` for `{}`",
                argv[sub_pos]
            )));
        }
        if flag_present(argv, k) {
            continue;
        }
        if switches.contains(k) {
            match v.as_str() {
                "true" => extra.push(format!("--{k}")),
                "false" => {}
                _ => return Err(invalid(format!("key `{k}` expects true or false, got `{v}`"))),
            }
        } else {
            extra.push(format!("--{k}={v}"));
        }
    }
    let mut merged = argv[..=sub_pos].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&argv[sub_pos + 1..]);
    Ok(merged)
}

/// Parses `argv` (including the program name), folding in the config file
/// given here or through `--config`, and validates the parameters.
pub fn parse_config(argv: &[String], file: Option<&Path>) -> Result<RunConfig, UsageError> {
    let file = file.map(Path::to_path_buf).or_else(|| find_config_flag(argv));
    let merged = match file {
        Some(path) => merge_file(argv, &read_config_file(&path)?)?,
        None => argv.to_vec(),
    };
    let cli = Cli::try_parse_from(&merged).map_err(UsageError::Clap)?;
    validate(&cli.command)?;
    if cli.threads == Some(0) {
        return Err(invalid("`threads` must be >= 1"));
    }
    Ok(RunConfig {
        command: cli.command,
        output_path: cli.out,
        seed: cli.seed,
        threads: cli.threads,
    })
}

fn main_term_params(p: &Polynomial, q: &Polynomial, r: f64, theta: f64) -> Result<MainTermParams, UsageError> {
    MainTermParams::new(p.clone(), q.clone(), r, theta).map_err(|e| invalid(e.to_string()))
}

pub fn moment_config(a: &MomentArgs) -> Result<MomentRunConfig, UsageError> {
    let err = |e: levinson::Error| invalid(e.to_string());
    let mut cfg = MomentRunConfig::new(a.t_big, a.theta, a.r, a.p.clone(), a.q.clone()).map_err(err)?;
    let kind = match a.window {
        WindowArg::Majorant => WindowKind::Majorant,
        WindowArg::Minorant => WindowKind::Minorant,
        WindowArg::Bump => WindowKind::CenteredBump {
            center: 0.75 * a.t_big,
            plateau: a.plateau * a.t_big,
        },
    };
    cfg.window = WindowSpec::new(a.t_big, kind).map_err(err)?;
    cfg.quad_step = a.step;
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

fn validate(cmd: &Command) -> Result<(), UsageError> {
    match cmd {
        Command::Mainterm(a) => {
            main_term_params(&a.p, &a.q, a.r, a.theta)?;
            if a.nodes < 2 {
                return Err(invalid("`nodes` must be >= 2"));
            }
        }
        Command::Optimize(a) => {
            let spec = crate::commands::optimize_spec(a);
            spec.validate().map_err(|e| invalid(e.to_string()))?;
        }
        Command::Moment(a) => {
            moment_config(a)?;
        }
        Command::VerifyAfe(a) => {
            levinson::afe::AfeShifts::real(a.alpha, a.beta).map_err(|e| invalid(e.to_string()))?;
            if !(50.0..=1e4).contains(&a.t.abs()) {
                return Err(invalid(format!("`t` must satisfy 50 <= |t| <= 1e4, got {}", a.t)));
            }
            if a.truncation < 1 {
                return Err(invalid("`truncation` must be >= 1"));
            }
        }
        Command::VerifyArith(a) => {
            if a.cap < 1 {
                return Err(invalid("`cap` must be >= 1"));
            }
            if !(a.s_re > 0.0) {
                return Err(invalid(format!("`s_re` must be > 0, got {}", a.s_re)));
            }
        }
        Command::Reproduce(_) => {}
    }
    Ok(())
}
