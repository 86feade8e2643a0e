//! `kummer`: class number ratios and Euler-Kronecker differences for
//! prime cyclotomic fields, one modulus at a time or in resumable scans.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use kummer_cli::candidates::rank_candidates;
use kummer_cli::output::format_sig;
use kummer_cli::scan::{
    load_checkpoint, run_scan, summarize, validate_ascending, ScanConfig, ScanError, ScanKind,
};
use kummer_cli::sieve::SIEVE_LIMIT;
use kummer_core::ek::ek_difference_with;
use kummer_core::ratio::{kummer_ratio_with, log10_g, Method};
use kummer_core::Limits;

#[derive(Parser)]
#[command(
    name = "kummer",
    version,
    about = "Class number ratios and Euler-Kronecker differences for prime cyclotomic fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one modulus and print the result
    Compute(ComputeArgs),
    /// Evaluate every odd prime in a range into a resumable CSV
    Scan(ScanArgs),
    /// Recompute the summary of an existing scan CSV
    Stats(StatsArgs),
    /// Rank moduli by their supply of auxiliary primes b*q + 1
    Candidates(CandidatesArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Odd prime modulus
    q: u64,
    /// Evaluation strategy for the ratio
    #[arg(long, default_value = "bernoulli", value_parser = Method::from_str)]
    method: Method,
    /// Compute the Euler-Kronecker difference instead of the ratio
    #[arg(long)]
    ek: bool,
    /// Significant digits in the report
    #[arg(long, default_value_t = 15)]
    digits: usize,
    /// Largest q the oracle method accepts
    #[arg(long)]
    oracle_cap: Option<u64>,
    /// Table memory budget in bytes
    #[arg(long)]
    memory_budget: Option<u64>,
}

#[derive(Args)]
struct ScanArgs {
    /// First modulus of the range (inclusive)
    start: u64,
    /// Last modulus of the range (inclusive)
    end: u64,
    /// Output CSV; doubles as the checkpoint for resuming
    #[arg(long)]
    out: PathBuf,
    /// Evaluation strategy for ratio rows
    #[arg(long, default_value = "bernoulli", value_parser = Method::from_str)]
    method: Method,
    /// Scan Euler-Kronecker differences instead of ratios
    #[arg(long)]
    ek: bool,
    /// Worker threads (default: one per core)
    #[arg(long, env = "KUMMER_JOBS")]
    jobs: Option<usize>,
    /// Largest q the oracle method accepts
    #[arg(long)]
    oracle_cap: Option<u64>,
    /// Table memory budget in bytes
    #[arg(long)]
    memory_budget: Option<u64>,
}

#[derive(Args)]
struct StatsArgs {
    /// Scan CSV to summarize
    file: PathBuf,
}

#[derive(Args)]
struct CandidatesArgs {
    /// First modulus of the range (inclusive)
    start: u64,
    /// Last modulus of the range (inclusive)
    end: u64,
    /// Largest multiplier b to try
    #[arg(long, default_value_t = 20)]
    b_limit: u64,
    /// How many ranked moduli to print
    #[arg(long, default_value_t = 10)]
    count: usize,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] kummer_core::Error),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    /// 2 for things the caller got wrong, 1 for faults in here.
    fn code(&self) -> u8 {
        fn core_code(e: &kummer_core::Error) -> u8 {
            match e {
                kummer_core::Error::VanishingCharacterSum { .. } => 1,
                _ => 2,
            }
        }
        match self {
            CliError::Precondition(_) => 2,
            CliError::Core(e) => core_code(e),
            CliError::Scan(ScanError::Core(e)) => core_code(e),
            CliError::Scan(ScanError::Io { .. }) => 1,
            CliError::Scan(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(e.code())
        }
    }
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Compute(a) => compute(a),
        Cmd::Scan(a) => scan(a),
        Cmd::Stats(a) => stats(a),
        Cmd::Candidates(a) => candidates(a),
    }
}

fn limits_from(oracle_cap: Option<u64>, memory_budget: Option<u64>) -> Limits {
    let defaults = Limits::default();
    Limits {
        oracle_cap: oracle_cap.unwrap_or(defaults.oracle_cap),
        // The dominating tables hold 8-byte entries.
        table_entries: memory_budget.map_or(defaults.table_entries, |bytes| bytes / 8),
    }
}

fn compute(a: ComputeArgs) -> Result<(), CliError> {
    let limits = limits_from(a.oracle_cap, a.memory_budget);
    if a.ek {
        let r = ek_difference_with(a.q, &limits)?;
        println!("q = {}", r.q);
        println!("kind = ek");
        println!("diff = {}", format_sig(r.diff, a.digits));
        println!("normalized = {}", format_sig(r.normalized, a.digits));
        println!("residual_imag = {}", format_sig(r.residual_imag, 3));
    } else {
        let r = kummer_ratio_with(a.q, a.method, &limits)?;
        println!("q = {}", r.q);
        println!("kind = kummer");
        println!("method = {}", r.method);
        println!("log_r = {}", format_sig(r.log_r, a.digits));
        println!("r = {}", format_sig(r.r, a.digits));
        println!("log10_G = {}", format_sig(log10_g(r.q), a.digits));
        println!("arg_defect = {}", format_sig(r.arg_defect, 3));
        println!("elapsed_ms = {:.3}", r.elapsed_ns as f64 / 1e6);
    }
    Ok(())
}

fn check_range(start: u64, end: u64) -> Result<(), CliError> {
    if end > SIEVE_LIMIT {
        return Err(CliError::Precondition(format!(
            "range end {end} exceeds the supported limit {SIEVE_LIMIT}"
        )));
    }
    if start > end {
        return Err(CliError::Precondition(format!(
            "empty range: start {start} > end {end}"
        )));
    }
    Ok(())
}

fn scan(a: ScanArgs) -> Result<(), CliError> {
    check_range(a.start, a.end)?;
    let cfg = ScanConfig {
        kind: if a.ek { ScanKind::Ek } else { ScanKind::Kummer },
        method: a.method,
        start: a.start,
        end: a.end,
        out: a.out,
        jobs: a.jobs.unwrap_or(0),
        limits: limits_from(a.oracle_cap, a.memory_budget),
    };
    let summary = run_scan(&cfg)?;
    println!("{summary}");
    Ok(())
}

fn stats(a: StatsArgs) -> Result<(), CliError> {
    let ck = load_checkpoint(&a.file)?;
    if ck.torn_bytes > 0 {
        eprintln!(
            "note: ignoring {} bytes of unterminated trailing line",
            ck.torn_bytes
        );
    }
    let Some(first) = ck.rows.first() else {
        return Err(CliError::Precondition(format!(
            "{}: no rows to summarize",
            a.file.display()
        )));
    };
    let kind = first.kind;
    if let Some(stray) = ck.rows.iter().find(|r| r.kind != kind) {
        return Err(CliError::Precondition(format!(
            "{}: mixes {} and {} rows",
            a.file.display(),
            kind,
            stray.kind
        )));
    }
    validate_ascending(&a.file, &ck.rows)?;
    println!("{}", summarize(kind, &ck.rows));
    Ok(())
}

fn candidates(a: CandidatesArgs) -> Result<(), CliError> {
    check_range(a.start, a.end)?;
    println!("q,score");
    for c in rank_candidates(a.start, a.end, a.b_limit, a.count) {
        println!("{},{}", c.q, c.score);
    }
    Ok(())
}
