use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use burstlab_cli::commands;
use burstlab_cli::config::{self, Kind, Overrides};

#[derive(Parser)]
#[command(name = "burstlab", version, about = "aEIF network simulations and burst-synchronization analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Firing-pattern map over reset potential and injected current.
    Scan(Args),
    /// One isolated neuron.
    Single(Args),
    /// Coupled network: spikes, synchronization, locked phase.
    Net(Args),
    /// Coupled vs uncoupled spike-time differences.
    Td(Args),
    /// Primary neurons, layers, propagation graph and order checks.
    Hierarchy(Args),
    /// Two-node synchronization sweep.
    ToySweep(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides $BURSTLAB_OUT and the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Integration step (ms).
    #[arg(long)]
    dt: Option<f64>,
}

fn run(cli: Cli) -> Result<()> {
    let (kind, args) = match cli.command {
        Command::Scan(a) => (Kind::Scan, a),
        Command::Single(a) => (Kind::Single, a),
        Command::Net(a) => (Kind::Net, a),
        Command::Td(a) => (Kind::Td, a),
        Command::Hierarchy(a) => (Kind::Hierarchy, a),
        Command::ToySweep(a) => (Kind::ToySweep, a),
    };
    let overrides = Overrides { out: args.out, seed: args.seed, dt: args.dt };
    let mut res = config::load(&args.config, &overrides)?;
    if res.kind != kind {
        // hierarchy subsumes td; any network config can drive net/td/hierarchy
        let network = |k: Kind| matches!(k, Kind::Net | Kind::Td | Kind::Hierarchy);
        if !(network(res.kind) && network(kind)) {
            bail!(
                "{}: config declares kind `{}` but `{}` was requested",
                args.config.display(),
                res.kind.as_str(),
                kind.as_str()
            );
        }
        res.kind = kind;
    }
    let written = commands::run(&res)?;
    println!("{}: wrote {} files to {}", kind.as_str(), written.len(), res.out_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
