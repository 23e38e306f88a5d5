use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use longrate::{run, ArbitrageArgs, Command, LoadedConfig, RunError};
use longrate_core::regimes::Orientation;

#[derive(Parser)]
#[command(name = "longrate", version, about = "Long-term swap rates, annuities and regime checks")]
struct Cli {
    /// JSON experiment config (see schema/experiment.schema.json)
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// CSV destination; defaults to $LONGRATE_OUT_DIR/<command>.csv, then stdout
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Default output directory
    #[arg(long, env = "LONGRATE_OUT_DIR", hide_env_values = true, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Single bond price P(t, T)
    Price {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        maturity: Option<f64>,
    },
    /// Price, yield, simple rate and OIS par rate on the tenor grid
    Rates,
    /// Long-term limits and their closed forms
    Longterm,
    /// Monte Carlo bond price and floating leg against exact values
    McCheck,
    /// Uniform-on-compacts deviation probabilities of annuity sums
    Ucp,
    /// Regime table checks over the built-in curve corpus
    Regimes,
    /// Payoffs of the two-swap portfolio
    Arbitrage(ArbArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    PayerThenReceiver,
    ReceiverThenPayer,
}

#[derive(Args)]
struct ArbArgs {
    /// Fixed rate of the swap entered at t
    #[arg(long)]
    rt: f64,
    /// Fixed rate of the swap entered at s
    #[arg(long)]
    rs: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    notional: f64,
    /// Number of exchanges
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[arg(long, value_enum, default_value = "payer-then-receiver")]
    orientation: OrientationArg,
    /// Random floating-rate paths to check against
    #[arg(long, default_value_t = 10)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn command(cmd: Cmd) -> Command {
    match cmd {
        Cmd::Price { t, maturity } => Command::Price { t, maturity },
        Cmd::Rates => Command::Rates,
        Cmd::Longterm => Command::Longterm,
        Cmd::McCheck => Command::McCheck,
        Cmd::Ucp => Command::Ucp,
        Cmd::Regimes => Command::Regimes,
        Cmd::Arbitrage(a) => Command::Arbitrage(ArbitrageArgs {
            t: a.t,
            s: a.s,
            rate_t: a.rt,
            rate_s: a.rs,
            delta: a.delta,
            notional: a.notional,
            m: a.m,
            orientation: match a.orientation {
                OrientationArg::PayerThenReceiver => Orientation::PayerThenReceiver,
                OrientationArg::ReceiverThenPayer => Orientation::ReceiverThenPayer,
            },
            paths: a.paths,
            seed: a.seed,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd = command(cli.command);
    let result = cli
        .config
        .as_deref()
        .map(LoadedConfig::from_path)
        .transpose()
        .and_then(|cfg| run(&cmd, cfg.as_ref(), cli.out.as_deref(), cli.out_dir.as_deref()));
    match result {
        Ok(Some(path)) => {
            eprintln!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("longrate {}: {e}", cmd.name());
            ExitCode::from(exit_byte(&e))
        }
    }
}

fn exit_byte(e: &RunError) -> u8 {
    e.exit_code() as u8
}
