//! Command-line driver for `symquot-core`: representation configs, seeded
//! instance generation, reports and trajectory dumps.

pub mod args;
pub mod commands;
pub mod config;
pub mod generate;
pub mod output;

use std::fmt;

pub use args::Cli;
pub use commands::{execute, Outcome};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code for success.
pub const EXIT_OK: u8 = 0;
/// Exit code for usage, config and IO errors.
pub const EXIT_USAGE: u8 = 1;
/// Exit code for failed verifications and numerical failures.
pub const EXIT_FAILED: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Core(symquot_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<symquot_core::Error> for CliError {
    fn from(e: symquot_core::Error) -> Self {
        match e {
            symquot_core::Error::MalformedConfig(m) => CliError::Config(m),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use symquot_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(
                E::Unsupported(_)
                | E::InvalidOptions(_)
                | E::DimensionMismatch { .. }
                | E::ZeroVectorInProjectiveMode,
            ) => EXIT_USAGE,
            CliError::Core(_) => EXIT_FAILED,
        }
    }
}
