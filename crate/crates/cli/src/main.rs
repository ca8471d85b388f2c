//! `odoshadow`: construct and verify regular points, fingerprint odometers,
//! check shadowing, and analyse δ-chain graphs of grid maps.
//!
//! Exit codes: 0 success, 1 a check or verification failed, 2 usage, parse
//! or input errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "odoshadow", version, about = "Exact shadowing, odometer recognition and chain graphs")]
struct Cli {
    /// Run every stage on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a point with periodic or odometer ω-limit set within eps of a point.
    Construct(ConstructArgs),
    /// Recheck a construct report offline.
    Verify(VerifyArgs),
    /// Chain recurrent set and terminal components of a grid map at one delta.
    Cr(CrArgs),
    /// Return-time fingerprint, optionally with the clopen partition at a tolerance.
    Fingerprint(FingerprintArgs),
    /// Shadow a stored pseudo-orbit and report the exact defects.
    ShadowCheck(ShadowArgs),
    /// Finite chain-continuity scan of a grid map.
    CcScan(ScanArgs),
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    system: String,
    #[arg(long)]
    point: String,
    #[arg(long)]
    eps: String,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Multiples checked by the recurrence clause of the verifier.
    #[arg(long, default_value_t = odoshadow::constructor::RR_HORIZON)]
    rr_horizon: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    cert: PathBuf,
    #[arg(long, default_value_t = odoshadow::constructor::RR_HORIZON)]
    rr_horizon: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CrArgs {
    #[arg(long)]
    system: String,
    #[arg(long)]
    delta: String,
    /// Also intersect with these deltas (comma separated).
    #[arg(long, value_delimiter = ',')]
    ladder: Vec<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    condensation_dot: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FingerprintArgs {
    #[arg(long)]
    system: String,
    #[arg(long)]
    point: String,
    #[arg(long)]
    depth: u32,
    #[arg(long, default_value_t = 1 << 16)]
    horizon: usize,
    /// Also describe the clopen partition at this tolerance.
    #[arg(long)]
    partition_eps: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ShadowArgs {
    /// JSON file `{"system": ..., "preperiod": [...], "cycle": [...]}`.
    #[arg(long)]
    orbit: PathBuf,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    system: String,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    delta: String,
    #[arg(long)]
    horizon: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        odoshadow::Exec::Sequential
    } else {
        odoshadow::Exec::Parallel
    };
    let result = match cli.command {
        Command::Construct(a) => commands::construct(a, exec),
        Command::Verify(a) => commands::verify(a),
        Command::Cr(a) => commands::cr(a, exec),
        Command::Fingerprint(a) => commands::fingerprint(a),
        Command::ShadowCheck(a) => commands::shadow_check(a),
        Command::CcScan(a) => commands::cc_scan(a, exec),
    };
    match result {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail(msg)) => {
            eprintln!("odoshadow: check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("odoshadow: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
