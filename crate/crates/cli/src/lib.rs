//! Argument handling and command execution for the `levinson` binary.

pub mod commands;
pub mod config;
pub mod reproduce;

pub use config::{parse_config, Cli, Command, RunConfig, UsageError};

/// Exit status for a run whose numbers fall outside their brackets.
pub const EXIT_ACCEPTANCE: i32 = 1;
/// Exit status for malformed input.
pub const EXIT_USAGE: i32 = 2;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LEVINSON_OUT_DIR";
