//! Command-line front end for `dicke-core`.
//!
//! [`run`] is the whole program: it parses nothing itself, so tests can build
//! a [`Cli`] directly and inspect the exit code and output.

pub mod args;
pub mod commands;
pub mod error;
pub mod figures;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};

pub use args::Cli;
pub use commands::Report;
pub use error::CliError;

use args::Command;

/// Computes the requested dataset on a pool of `cli.threads` workers.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    in_pool(cli, || match &cli.command {
        Command::Stats(a) => commands::stats(a),
        Command::QminSweep(a) => commands::qmin_sweep(a),
        Command::Figure(a) => figures::figure(a),
        Command::Validate(a) => commands::validate(a),
    })
}

pub fn in_pool<R: Send>(cli: &Cli, job: impl FnOnce() -> Result<R, CliError> + Send) -> Result<R, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} worker threads: {e}", cli.threads)))?;
    pool.install(job)
}

/// Writes a finished report and maps the outcome to an exit code.
pub fn finish(cli: &Cli, outcome: Result<Report, CliError>) -> i32 {
    let result = outcome.and_then(|report| {
        write(cli, &report)?;
        Ok(report.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("dicke: validation failed; see the report for the offending cases");
            1
        }
        Err(e) => {
            eprintln!("dicke: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    finish(cli, execute(cli))
}

fn write(cli: &Cli, report: &Report) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            report.dataset.write(cli.format, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            report.dataset.write(cli.format, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}
