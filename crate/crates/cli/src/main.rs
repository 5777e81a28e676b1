use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ntn_cli::{emit_csv, run, write_metadata, CliError, RawConfig, RunConfig};
use ntn_core::montecarlo::replication_rng;
use ntn_core::pointprocess::{sample_bpp, sample_mhccp, write_realization};

/// Outage probability of a UAV-to-satellite uplink, closed form and
/// Monte Carlo.
#[derive(Parser)]
#[command(name = "ntn-outage", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured scenario and write CSV.
    Run(RunArgs),
    /// Like `run`, sweeping one parameter.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// One of T, p_m, R1, K, lambda1.
        #[arg(long)]
        param: String,
        /// Comma-separated values in configuration units (dB, dBW, km, count, m^-3).
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Check a configuration without running it.
    Validate { config: Option<PathBuf> },
    /// Write one realization of both node groups as CSV.
    Dump {
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file; omitted means all defaults.
    config: Option<PathBuf>,
    /// analytic, montecarlo or both.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_iter: Option<u64>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave runtime_ms empty so output is byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

fn read_config(path: Option<&Path>) -> Result<RawConfig, CliError> {
    match path {
        None => Ok(RawConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                context: format!("reading {}", p.display()),
                source,
            })?;
            RawConfig::parse(&text)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        None => Box::new(io::stdout().lock()),
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Io {
            context: format!("creating {}", p.display()),
            source,
        })?)),
    })
}

fn execute(args: &RunArgs, sweep: Option<(&str, &str)>) -> Result<(), CliError> {
    let mut raw = read_config(args.config.as_deref())?;
    if let Some(mode) = &args.mode {
        raw.set("mode", mode)?;
    }
    if let Some(seed) = args.seed {
        raw.set("seed", &seed.to_string())?;
    }
    if let Some(n) = args.n_iter {
        raw.set("n_iter", &n.to_string())?;
    }
    if let Some((param, values)) = sweep {
        raw.set("sweep_param", param)?;
        raw.set("sweep_values", values)?;
    }
    let cfg: RunConfig = raw.build()?;
    let _ = write_metadata(&cfg, io::stderr().lock());
    let rows = run(&cfg, !args.no_timing)?;
    emit_csv(&rows, output(args.out.as_deref())?)
}

fn dump(config: Option<&Path>, seed: Option<u64>, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = read_config(config)?.build()?;
    let mut rng = replication_rng(seed.unwrap_or(cfg.seed), 0);
    let scn = &cfg.scenario;
    let bpp = sample_bpp(&mut rng, scn.n1_total, &scn.region());
    let mhccp = sample_mhccp(&mut rng, &scn.topology);
    let mut w = output(out)?;
    write_realization(&mut w, &bpp, &mhccp)
        .and_then(|_| w.flush())
        .map_err(|source| CliError::Io {
            context: "writing realization".into(),
            source,
        })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => execute(args, None),
        Command::Sweep { run, param, values } => execute(run, Some((param, values))),
        Command::Validate { config } => read_config(config.as_deref())
            .and_then(|raw| raw.build())
            .map(|_| eprintln!("configuration ok")),
        Command::Dump { config, seed, out } => dump(config.as_deref(), *seed, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
