//! `wittram` — exact computation and verification for truncated
//! de Rham–Witt complexes of equal-characteristic local fields.
//!
//! Exit codes: 0 verified / ok, 2 falsified, 3 inconclusive at the
//! requested precision, 64 usage error.

mod commands;
mod suites;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

use suites::Suite;

#[derive(Parser)]
#[command(
    name = "wittram",
    version,
    about = "Exact de Rham-Witt computations over F_q((pi)) with verification reports"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate and cache the universal Witt structure polynomials
    WittTables {
        /// Prime p
        #[arg(short)]
        p: u64,
        /// Witt length m
        #[arg(short)]
        m: u8,
        /// Operation: add, neg, mul or frobenius
        #[arg(long)]
        kind: String,
        /// Cache directory (overrides WITTRAM_CACHE)
        #[arg(long, value_name = "DIR")]
        cache_dir: Option<PathBuf>,
    },
    /// Artin-Schreier-Witt conductor of a class in W_m(K)/(F-1)
    Conductor {
        /// Prime p
        #[arg(short)]
        p: u64,
        /// Residue field degree e, q = p^e
        #[arg(short, default_value_t = 1)]
        e: u8,
        /// Witt length m
        #[arg(short)]
        m: u8,
        /// One Laurent series per Witt coordinate, Teichmuller position
        /// first, e.g. "pi^-3" "1"
        #[arg(required = true, value_name = "COORD")]
        coords: Vec<String>,
        /// Skip the brute-force cross-check
        #[arg(long)]
        no_oracle: bool,
    },
    /// Dimension table of graded pieces gr_n and T-space jumps
    GradedDims {
        /// Prime p
        #[arg(short)]
        p: u64,
        /// Residue field degree e, q = p^e
        #[arg(short, default_value_t = 1)]
        e: u8,
        /// Witt length m
        #[arg(short)]
        m: u8,
        /// Form degree q (0 or 1)
        #[arg(short, default_value_t = 0)]
        q: u8,
        /// First graded index n
        #[arg(long)]
        from: i64,
        /// Last graded index n (inclusive)
        #[arg(long)]
        to: i64,
        /// Series precision window
        #[arg(long, default_value_t = 12)]
        prec: i64,
    },
    /// Log-dimension of the conductor space T^{m,q}_n with stability check
    TspaceDim {
        /// Prime p
        #[arg(short)]
        p: u64,
        /// Residue field degree e, q = p^e
        #[arg(short, default_value_t = 1)]
        e: u8,
        /// Witt length m
        #[arg(short)]
        m: u8,
        /// Form degree q (0 or 1)
        #[arg(short, default_value_t = 0)]
        q: u8,
        /// Filtration index n
        #[arg(short)]
        n: i64,
        /// Series precision window
        #[arg(long, default_value_t = 12)]
        prec: i64,
    },
    /// Run a verification suite and emit an aggregate JSON report
    Verify {
        /// Which suite to run
        #[arg(long, value_enum)]
        suite: Suite,
        /// Series precision window
        #[arg(long, default_value_t = 12)]
        prec: i64,
        /// Root seed for all randomized claims
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the report to this file
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Worker pool size (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };

    let outcome = match cli.cmd {
        Cmd::WittTables {
            p,
            m,
            kind,
            cache_dir,
        } => commands::cmd_witt_tables(p, m, &kind, cache_dir),
        Cmd::Conductor {
            p,
            e,
            m,
            coords,
            no_oracle,
        } => commands::cmd_conductor(p, e, m, &coords, no_oracle),
        Cmd::GradedDims {
            p,
            e,
            m,
            q,
            from,
            to,
            prec,
        } => commands::cmd_graded_dims(p, e, m, q, from, to, prec),
        Cmd::TspaceDim { p, e, m, q, n, prec } => commands::cmd_tspace_dim(p, e, m, q, n, prec),
        Cmd::Verify {
            suite,
            prec,
            seed,
            out,
            jobs,
        } => cmd_verify(suite, prec, seed, out, jobs),
    };

    match outcome {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code_for(&err));
        }
    }
}

fn cmd_verify(
    suite: Suite,
    prec: i64,
    seed: u64,
    out: Option<PathBuf>,
    jobs: Option<usize>,
) -> wittram_core::Result<i32> {
    let jobs = jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    if jobs == 0 {
        return Err(wittram_core::Error::parse("--jobs must be at least 1"));
    }
    let report = suites::run_suite(suite, prec, seed, jobs)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(path) = &out {
        std::fs::write(path, &json)?;
    }
    print!("{json}");
    Ok(report.exit_code())
}

fn exit_code_for(err: &wittram_core::Error) -> i32 {
    use wittram_core::Error;
    match err {
        Error::Precision(_) => 3,
        Error::Caps(_) | Error::Domain(_) | Error::Parse(_) => 64,
        _ => 1,
    }
}
