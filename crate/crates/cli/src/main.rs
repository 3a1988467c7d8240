//! `dipchain`: tables of mode functions, amplitude factors, lifetimes and
//! emission patterns for a linear chain of polarizable atoms.
//!
//! Exit status: 0 success, 1 invalid configuration, 2 solver failure,
//! 3 golden-check failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use dipchain::commands::{execute, Command};
use dipchain::config::{Format, GlobalArgs, RunConfig};
use dipchain::error::CliError;
use dipchain::table::Table;

#[derive(Debug, Parser)]
#[command(
    name = "dipchain",
    version,
    about = "Local-field simulator for a linear atomic chain"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

fn emit(table: &Table, cfg: &RunConfig) -> io::Result<()> {
    let mut out: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cfg.format {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => table.write_json(&mut out)?,
    }
    out.flush()
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = RunConfig::resolve(&cli.global, &cli.command.default_couplings())?;
    let outcome = execute(&cli.command, &cfg)?;
    emit(&outcome.table, &cfg)?;
    if !outcome.check_failures.is_empty() {
        for f in &outcome.check_failures {
            eprintln!("dipchain: golden check failed: {f}");
        }
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dipchain: {e}");
            if matches!(e, CliError::Solver(_)) {
                eprintln!("rows: 0");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
