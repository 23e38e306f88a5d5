//! Configuration, CSV output and parallel Monte Carlo on top of
//! [`longrate_core`].
//!
//! [`run`] executes one subcommand against an [`ExperimentConfig`] and writes
//! its CSV to a file or stdout. Exit codes for the binary come from
//! [`RunError::exit_code`]: 2 for configuration and usage errors, 3 when a
//! long-term limit is `Undetermined`, 1 for anything else.

pub mod commands;
pub mod config;
pub mod output;
pub mod parallel;

use std::io::Write;
use std::path::{Path, PathBuf};

pub use commands::{ArbitrageArgs, Output, Status};
pub use config::{ExperimentConfig, LoadedConfig};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("check failed: {0}")]
    Failed(String),
    #[error(transparent)]
    Model(#[from] longrate_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Undetermined(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Price { t: Option<f64>, maturity: Option<f64> },
    Rates,
    Longterm,
    McCheck,
    Ucp,
    Regimes,
    Arbitrage(ArbitrageArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Price { .. } => "price",
            Command::Rates => "rates",
            Command::Longterm => "longterm",
            Command::McCheck => "mc-check",
            Command::Ucp => "ucp",
            Command::Regimes => "regimes",
            Command::Arbitrage(_) => "arbitrage",
        }
    }

    pub fn needs_config(&self) -> bool {
        !matches!(self, Command::Arbitrage(_) | Command::Regimes)
    }
}

/// Runs `command` and returns its output without writing anything.
pub fn execute(command: &Command, config: Option<&ExperimentConfig>) -> Result<Output, RunError> {
    let default;
    let cfg = match config {
        Some(c) => c,
        None if !command.needs_config() => {
            default = LoadedConfig::from_str("{}")?.config;
            &default
        }
        None => return Err(RunError::Config(format!("--config is required by {}", command.name()))),
    };
    match command {
        Command::Price { t, maturity } => commands::price(cfg, *t, *maturity),
        Command::Rates => commands::rates(cfg),
        Command::Longterm => commands::longterm(cfg),
        Command::McCheck => commands::mc_check(cfg),
        Command::Ucp => commands::ucp(cfg),
        Command::Regimes => commands::regimes(cfg),
        Command::Arbitrage(args) => commands::arbitrage(args),
    }
}

/// Executes `command`, writes the CSV and maps the status to an error.
/// The CSV is written even when the status is not `Ok`.
pub fn run(
    command: &Command,
    config: Option<&LoadedConfig>,
    out: Option<&Path>,
    env_dir: Option<&Path>,
) -> Result<Option<PathBuf>, RunError> {
    let output = execute(command, config.map(|c| &c.config))?;
    let sha256 = match (command, config) {
        (Command::Arbitrage(args), _) => config::sha256_hex(format!("{args:?}").as_bytes()),
        (_, Some(c)) => c.sha256.clone(),
        (_, None) => config::sha256_hex(b"{}"),
    };
    let meta = output::Meta { command: command.name().into(), config_sha256: sha256, seed: output.seed };
    let bytes = output::render(&output.table, &meta)?;
    let config_out = config.and_then(|c| c.config.output.path.as_deref());
    let dest = output::destination(out, config_out, env_dir, command.name());
    match &dest {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, &bytes)?;
        }
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    match output.status {
        Status::Ok => Ok(dest),
        Status::Undetermined(msg) => Err(RunError::Undetermined(msg)),
        Status::Failed(msg) => Err(RunError::Failed(msg)),
    }
}
