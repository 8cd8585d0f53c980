use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use risklab::cli::{run, RunConfig, Subcommand};
use risklab::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Price,
    Smile,
    Hedge,
    Convexity,
    CheckMeasure,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Price => Subcommand::Price,
            Command::Smile => Subcommand::Smile,
            Command::Hedge => Subcommand::Hedge,
            Command::Convexity => Subcommand::Convexity,
            Command::CheckMeasure => Subcommand::CheckMeasure,
        }
    }
}

/// Pricing and hedging under intrinsic-risk adjusted measures.
///
/// Worker threads can be capped with RISKLAB_THREADS; results do not depend on it.
#[derive(Debug, Parser)]
#[command(name = "risklab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; overrides the configuration. Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn execute(args: Args) -> Result<(), Error> {
    let cmd = Subcommand::from(args.command);
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut config = RunConfig::parse(&text, cmd)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let output = args.output.or_else(|| config.output.clone().map(PathBuf::from));

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("RISKLAB_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::config(format!("RISKLAB_THREADS must be a positive integer, got {v:?}")))?;
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    let report = pool.install(|| run(cmd, &config))?;

    match output {
        Some(path) => std::fs::write(&path, report)
            .map_err(|e| Error::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("risklab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
