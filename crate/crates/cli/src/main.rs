use std::io::Write;
use std::process::ExitCode;

use levinson_cli::commands::{execute, output_target};
use levinson_cli::{parse_config, UsageError, EXIT_ACCEPTANCE, EXIT_USAGE};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cfg = match parse_config(&argv, None) {
        Ok(cfg) => cfg,
        Err(UsageError::Clap(e)) => e.exit(),
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if let Some(n) = cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ACCEPTANCE as u8);
        }
    };
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    match output_target(&cfg) {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &outcome.output) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_ACCEPTANCE as u8);
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.output.as_bytes());
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
