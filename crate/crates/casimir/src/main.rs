//! `casimir`: thermal Casimir free energy, pressure and entropy between
//! parallel plates, with third-law audits of the reflection-coefficient
//! schemes.
//!
//! Exit status: 0 on success, 2 if any output row failed to converge
//! (partial tables are still written), 1 on configuration or I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use casimir::harness::{self, RunConfig};

#[derive(Parser)]
#[command(
    name = "casimir",
    version = concat!(env!("CARGO_PKG_VERSION"), " (constants CODATA-2018)"),
    about = "Casimir free energy, pressure and entropy between parallel plates under competing dielectric-response schemes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads (default: all cores). Results are byte-identical for
    /// any thread count.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured quantities at every grid point and print them.
    Compute(Common),
    /// Run the (a, T, scheme) sweep and emit the result table.
    Sweep(Common),
    /// Extrapolate entropy to T = 0 per scheme and audit the third law.
    Audit(Common),
    /// Tabulate per-point differences between schemes.
    Compare(Common),
}

fn load(common: &Common) -> casimir::Result<RunConfig> {
    if let Some(jobs) = common.jobs {
        // ignore failure: the global pool may already exist in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let mut config = harness::load_config(&common.config)?;
    if let Some(tol) = common.tol {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(casimir::CasimirError::Config(format!(
                "tol {tol} outside (0, 1)"
            )));
        }
        config.tol = tol;
    }
    Ok(config)
}

fn deliver(
    table: &harness::ResultTable,
    out: &Option<PathBuf>,
    echo_stdout: bool,
) -> casimir::Result<()> {
    match out {
        Some(path) => {
            harness::emit_table(table, path)?;
            if echo_stdout {
                print!("{}", table.to_csv());
            }
        }
        None => print!("{}", table.to_csv()),
    }
    Ok(())
}

fn run() -> casimir::Result<bool> {
    let cli = Cli::parse();
    let (table, common, echo) = match &cli.command {
        Command::Compute(c) => (harness::run_sweep(&load(c)?)?, c, true),
        Command::Sweep(c) => (harness::run_sweep(&load(c)?)?, c, false),
        Command::Audit(c) => (harness::nernst_audit(&load(c)?)?, c, false),
        Command::Compare(c) => (harness::scheme_compare(&load(c)?)?, c, false),
    };
    deliver(&table, &common.out, echo)?;
    Ok(table.any_failed)
}

fn main() -> ExitCode {
    match run() {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("warning: one or more rows did not converge (flagged in the table)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
