//! `weber-dirac`: spectra, residual scans, wavefunctions, the integer-order
//! check and the shooting cross-check, as CSV or JSON.
//!
//! Exit codes: 0 ok, 1 usage, 2 domain or window, 3 numeric failure,
//! 4 oracle mismatch.

mod args;
mod commands;
mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

use args::{Cli, Format};
use commands::{Failure, EXIT_USAGE};

fn emit(cli: &Cli, outcome: &commands::Outcome) -> io::Result<()> {
    let mut out: Box<dyn Write> = match &cli.global.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.global.format {
        Format::Csv => outcome.record.write_csv(&mut out, &mut io::stderr().lock())?,
        Format::Json => {
            let stamp = if cli.global.deterministic {
                None
            } else {
                SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
            };
            outcome.record.write_json(&mut out, stamp)?;
            for w in &outcome.record.warnings {
                eprintln!("warning: {w}");
            }
        }
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let code = match commands::run(&cli.command, &cli.global, &argv) {
        Ok(outcome) => match emit(&cli, &outcome) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                EXIT_USAGE
            }
        },
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            code
        }
    };
    ExitCode::from(code as u8)
}
