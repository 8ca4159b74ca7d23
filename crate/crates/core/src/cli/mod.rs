//! Configuration-driven runs: `run <config> [--seed N] [--out PATH]
//! [--threads N]`.
//!
//! A run writes a comma-separated table (one header line, floats with 17
//! significant digits) and a JSON sidecar next to it holding the config
//! echo, warnings, Monte-Carlo standard errors and wall time. Both files are
//! written atomically.
//!
//! Exit codes: 0 success, 2 configuration or parse error, 3 numerical
//! error, 4 I/O error.

mod config;
mod run;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};

pub use config::{
    GridDef, GridSpec, OracleSpec, PumpSpec, ResponseSpec, RunKind, ScenarioConfig, SweepSpec, WkSpec,
};
pub use run::{run, Cell, RunReport};

/// Environment variable giving the default worker-thread count.
pub const THREADS_ENV: &str = "PDC_COHERENCE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "pdc-coherence", version, about = "Two-photon coherence from partially coherent pumps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario described by a TOML config.
    Run {
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output table path (sidecar goes next to it with a `.json` extension).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; results do not depend on this.
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
    },
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse(_) => 2,
        Error::Io(_) => 4,
        _ => 3,
    }
}

/// Where the table goes: `--out`, else the config's `output`, else the
/// config path with a `.csv` extension.
pub fn output_path(config_path: &Path, config: &ScenarioConfig, out: Option<&Path>) -> PathBuf {
    match (out, &config.output) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => config.resolve(p),
        (None, None) => config_path.with_extension("csv"),
    }
}

pub fn sidecar_path(table: &Path) -> PathBuf {
    table.with_extension("json")
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Loads, runs and writes one scenario; returns the table path.
pub fn execute(config_path: &Path, seed: Option<u64>, out: Option<&Path>) -> Result<PathBuf> {
    let config = ScenarioConfig::load(config_path)?;
    let report = run(&config, seed)?;
    let table = output_path(config_path, &config, out);
    let sidecar = serde_json::to_string_pretty(&report.sidecar(&config))
        .map_err(|e| Error::InternalConsistency(e.to_string()))?;
    write_atomic(&table, report.table().as_bytes())?;
    write_atomic(&sidecar_path(&table), sidecar.as_bytes())?;
    Ok(table)
}

/// Entry point of the command-line binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            threads,
        } => {
            if let Some(n) = threads {
                if n == 0 {
                    eprintln!("error: --threads must be at least 1");
                    return ExitCode::from(2);
                }
                // Only fails if a pool already exists, which cannot happen here.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            match execute(&config, seed, out.as_deref()) {
                Ok(path) => {
                    println!("{}", path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code(&e))
                }
            }
        }
    }
}
