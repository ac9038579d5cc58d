//! `rsum`: command-line front end for the `riemann-sums` library.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a check
//! misses its tolerance.

mod args;
mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};

/// Caps the worker pool size.
const THREADS_VAR: &str = "RSUM_THREADS";

const EXIT_USAGE: u8 = 1;
const EXIT_TOLERANCE: u8 = 2;

/// Like `eprintln!`, but a closed stderr is not fatal.
macro_rules! report_err {
    ($($arg:tt)*) => {{
        let _ = writeln!(io::stderr(), $($arg)*);
    }};
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn write_report(cli: &Cli, report: &report::Report) -> io::Result<()> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Csv => report.write_csv(&mut out)?,
        Format::Json => report.write_json(&mut out)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Err(msg) = configure_threads() {
        report_err!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }

    let mut report = match commands::run(&cli.command, cli.seed) {
        Ok(r) => r,
        Err(e) => {
            report_err!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    report.config = serde_json::to_value(&cli).expect("config serializes");

    if let Err(e) = write_report(&cli, &report) {
        report_err!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        report_err!("{}", c.failure_message());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_TOLERANCE)
    }
}
