//! The `voronoi-forge` command line: argument parsing, dispatch and exit codes.
//!
//! Exit code 0 means success, 1 a domain error (including a failed
//! verification) and 2 a usage error.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub const THREADS_ENV: &str = "VORONOI_FORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "voronoi-forge", version, about = "Exact Voronoi-region analysis of lattices")]
pub struct Cli {
    /// Worker threads (falls back to VORONOI_FORGE_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Fractional digits of decimal renderings.
    #[arg(long, global = true, default_value_t = 16)]
    pub digits: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generator matrix, volume and covering radius of a lattice.
    Lattice(NamedArgs),
    /// Relevant vectors counted by squared length.
    Relvecs(NamedArgs),
    /// Automorphism group computations.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Face classes of the Voronoi region, or the representative facets of BW16.
    Faces(FacesArgs),
    /// Exact moments of the Voronoi region.
    #[command(subcommand)]
    Moments(MomentsCommand),
    /// Monte-Carlo estimates.
    #[command(subcommand)]
    Mc(McCommand),
    /// Check the BW16 relevant-vector and vertex representatives.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct NamedArgs {
    /// Lattice name: Zn(n) or Zn, D4, E8, BW16.
    pub name: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Order of the automorphism group or of a named generating set.
    Order {
        name: String,
        /// For BW16: m1m2 (default), structured, p123, p14, p34 or signs.
        #[arg(long)]
        generators: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct FacesArgs {
    pub name: String,
    /// For BW16, build the whole face hierarchy (multi-hour).
    #[arg(long)]
    pub extended: bool,
    /// Directory for resumable per-dimension results.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Lowest dimension to classify.
    #[arg(long, default_value_t = 0)]
    pub min_dim: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum MomentsCommand {
    /// Volume, second moment, quantizer constant and isotropy of the region.
    Exact {
        name: String,
        /// Required for BW16.
        #[arg(long)]
        extended: bool,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum McCommand {
    /// Estimate U and G from uniform samples of the region.
    Estimate {
        name: String,
        #[arg(short = 'N', long = "samples", default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compare the direct and jackknife variance estimators over repeated runs.
    Compare {
        #[arg(long, default_value = "Z3")]
        lattice: String,
        #[arg(short = 'N', long = "samples", default_value_t = 100_000)]
        samples: u64,
        #[arg(short = 'g', long = "groups", default_value_t = 100)]
        groups: usize,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the per-repetition values to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("verification failed")]
    Failed,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

macro_rules! domain_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_errors!(
    voronoi_forge_core::lattice::LatticeError,
    voronoi_forge_core::group::GroupError,
    voronoi_forge_core::faces::FaceError,
    voronoi_forge_core::moments::MomentError,
    voronoi_forge_core::montecarlo::McError,
    voronoi_forge_core::verify::VerifyError,
    serde_json::Error
);

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if let Err(e) = configure_threads(cli.threads) {
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    match commands::dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), CliError> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(s) => Some(s.trim().parse().map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a number, got {s:?}")))?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // A second call in the same process (from tests) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}
