//! `catblocks`: batch driver for the verifications in `catblocks-core`.
//!
//! Every subcommand writes JSON-lines (or TSV) records and exits with
//! 0 (no failure records), 1 (some failure record) or 2 (bad configuration).

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::ConfigError;

#[derive(Parser, Debug)]
#[command(name = "catblocks", version, about = "Exact checks of two sl2 categorifications at the level of K-groups")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; CATBLOCKS_THREADS takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// FE + r = EF + (n - r) on Weyl-module classes in the blocks mu_r.
    VerifyBlocks {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        /// Only this block (default: every r in 0..=n).
        #[arg(long)]
        r: Option<usize>,
        /// Bound on the first part of the enumerated weights (default 3p).
        #[arg(long)]
        max_part: Option<i64>,
        /// Check a single weight, e.g. 20,13,7,2,2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<i64>>,
    },
    /// Casimir values separate the linkage classes of the lambda + e_i.
    Casimir {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
    },
    /// The n = 2 principal block: algebra A, K-matrices and the intertwiner.
    N2Suite {
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
    /// Fourier-Mukai kernels on T*Gr(r, n) by fixed-point localization.
    Ktheory {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        allow_n5: bool,
    },
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, ConfigError> {
    match std::env::var("CATBLOCKS_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError(format!("CATBLOCKS_THREADS must be a positive integer, got {v:?}"))),
        },
        Err(_) => match flag {
            Some(0) => Err(ConfigError("--threads must be positive".to_string())),
            other => Ok(other),
        },
    }
}

fn run(cli: Cli) -> Result<bool, ConfigError> {
    if let Some(t) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| ConfigError(format!("thread pool: {e}")))?;
    }
    let (name, records) = match cli.command {
        Command::VerifyBlocks { n, p, r, max_part, lambda } => {
            ("verify-blocks", commands::verify_blocks(n, p, r, max_part, lambda)?)
        }
        Command::Casimir { n, p } => ("casimir", commands::casimir(n, p)?),
        Command::N2Suite { p } => ("n2-suite", commands::n2_suite(p)?),
        Command::Ktheory { n, r, allow_n5 } => ("ktheory", commands::ktheory(n, r, allow_n5)?),
    };
    let records = commands::with_summary(name, records);
    let ok = !records.iter().any(catblocks::report::is_failure);
    let sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| ConfigError(format!("cannot create {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    output::write_records(&mut w, &records, cli.format)
        .and_then(|_| w.flush())
        .map_err(|e| ConfigError(format!("write failed: {e}")))?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("catblocks: {e}");
            ExitCode::from(2)
        }
    }
}
