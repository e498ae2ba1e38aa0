//! `fmk`: batch CLI over the library: field reports, descent screens, Frey
//! curve local data, bound constants, the elimination sieve, and exhaustive
//! desk-scale searches. Every subcommand emits one deterministic JSON
//! document (stdout or --out) prefixed with a reproducibility header.
//!
//! Exit codes: 0 success, 2 mathematical-check failure, 3 data error,
//! 4 budget exceeded, 64 usage.

mod cmds;
mod report;
mod search;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "fmk", version, about = "Frey-curve machinery over real cyclotomic fields", disable_help_subcommand = true)]
struct Cli {
    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Field layer: minimal polynomial, unit-lemma checks, prime splittings.
    Field {
        #[arg(long)]
        p: u64,
    },
    /// Descent screens for a witness pair (a, b).
    Descent {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        /// Optional exponent for the perfect-power consistency screen.
        #[arg(long)]
        ell: Option<u32>,
    },
    /// Build a Frey curve and emit local reduction data.
    Frey {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = KindArg::E)]
        kind: KindArg,
    },
    /// Exponent-bound constants and the p | y branch report.
    Bounds {
        #[arg(long)]
        p: u64,
        /// Constants file (defaults to the embedded fixture).
        #[arg(long)]
        constants: Option<PathBuf>,
        /// Rational-curve fixture file (defaults to the embedded fixture).
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// Run the elimination sieve against ingested newform records.
    Sieve {
        #[arg(long)]
        newforms: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        kind: SieveKindArg,
        /// Comma-separated q:ideal_index pairs, e.g. 3:0,67:0,101:0.
        #[arg(long)]
        primes: String,
        /// Exponents at or below this floor are reported as excluded.
        #[arg(long, default_value_t = 5)]
        floor: u64,
    },
    /// Exhaustive primitive-solution search at desk scale.
    Search {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
        /// Cap on |z| (enumeration budget; at most 10^6).
        #[arg(long)]
        max: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    E,
    F1,
    F2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SieveKindArg {
    F1,
    F2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Z3p,
    Z17,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    return ExitCode::from(0);
                }
                _ => 64,
            };
            eprint!("{e}");
            return ExitCode::from(code);
        }
    };
    init_thread_pool();
    let out = cli.out.clone();
    let result = match cli.cmd {
        Cmd::Field { p } => cmds::field::run(p, out.as_deref()),
        Cmd::Descent { p, a, b, ell } => cmds::descent::run(p, a, b, ell, out.as_deref()),
        Cmd::Frey { p, a, b, j, k, kind } => cmds::frey::run(p, a, b, j, k, kind, out.as_deref()),
        Cmd::Bounds {
            p,
            constants,
            curves,
        } => cmds::bounds::run(p, constants.as_deref(), curves.as_deref(), out.as_deref()),
        Cmd::Sieve {
            newforms,
            p,
            kind,
            primes,
            floor,
        } => cmds::sieve::run(&newforms, p, kind, &primes, floor, out.as_deref()),
        Cmd::Search { mode, p, n, max } => cmds::search_cmd::run(mode, p, n, max, out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &fmk_core::Error) -> u8 {
    use fmk_core::Error::*;
    match err {
        InvalidArgument(_) => 64,
        InvalidWitness(_) => 2,
        BudgetExceeded(_) => 4,
        LoadError { .. } | WriteError { .. } | MissingEigenvalue { .. } | InvalidEigenvalue(_) => 3,
        _ => 2,
    }
}

/// FMK_THREADS caps the worker count (default: machine parallelism).
fn init_thread_pool() {
    if let Ok(v) = std::env::var("FMK_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
