//! Sweeps n over a range, builds the mod-p window matrix for each n and
//! writes a JSON rank certificate.
//!
//! Exit codes: 0 all full rank, 2 some rank deficient, 3 entry-level failure
//! (integrality, divisibility or cross-check disagreement), 1 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use ternary_covariants::certifier::{sweep, SweepOptions};
use ternary_covariants::coeff_engine::Case;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseArg {
    D1,
    D2,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::D1 => Case::D1,
            CaseArg::D2 => Case::D2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(version, about = "Certify full rank of the mod-p window matrices over a period of n")]
struct Args {
    #[arg(long, value_enum)]
    case: CaseArg,
    /// First n; defaults to the smallest admissible n for the case.
    #[arg(long)]
    n_start: Option<u32>,
    /// Number of consecutive n; defaults to one full period.
    #[arg(long)]
    count: Option<u32>,
    /// Extra n past the range, each compared with its translate by one period.
    #[arg(long, default_value_t = 0)]
    extra: u32,
    /// Leading n re-derived through the quasi-polynomial path.
    #[arg(long, default_value_t = 1)]
    oracle_crosscheck: u32,
    /// Certificate path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn run(args: Args) -> anyhow::Result<i32> {
    let case: Case = args.case.into();
    let opts = SweepOptions {
        case,
        n_start: args.n_start.unwrap_or(case.min_n()),
        count: args.count.unwrap_or(case.period()),
        extra: args.extra,
        oracle_crosscheck: args.oracle_crosscheck,
        threads: args.threads,
    };
    let cert = match sweep(&opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(1);
        }
    };
    let json = serde_json::to_string_pretty(&cert)?;
    match &args.out {
        Some(path) => fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    let outcome = cert.outcome();
    eprintln!(
        "{} n in [{}, {}): all_full_rank = {}, outcome {:?}",
        case.tag(),
        opts.n_start,
        opts.n_start + opts.count + opts.extra,
        cert.all_full_rank,
        outcome
    );
    if let Some(f) = &cert.failure {
        eprintln!("failure: {f}");
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
