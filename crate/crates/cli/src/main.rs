//! riesz-kit: special functions, densities, samples and validation suites
//! for the Kotz-Riesz and Riesz families.
//!
//! stdout carries JSON only; diagnostics go to stderr. Exit codes: 0 pass,
//! 1 failed check, 2 usage, 3 domain, 4 unsupported.

mod commands;
mod error;
mod matrix_file;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{DensityCmd, SampleArgs, SpecialCmd, ValidateArgs};
use error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "riesz-kit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a special function.
    #[command(subcommand)]
    Special(SpecialCmd),
    /// Evaluate a log density.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Draw a type I Kotz-Riesz sample to a file.
    Sample(SampleArgs),
    /// Run a validation suite and print its report.
    Validate(ValidateArgs),
}

fn print_json(v: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("report serializes")
    );
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Special(cmd) => print_json(&commands::special(&cmd)?),
        Command::Density(cmd) => print_json(&commands::density(&cmd)?),
        Command::Sample(args) => print_json(&commands::sample(&args)?),
        Command::Validate(args) => {
            let argv: Vec<String> = std::env::args().skip(1).collect();
            let report = commands::validate(&args, argv)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Some(path) = &args.report {
                commands::write_report(path, &text)?;
            }
            println!("{text}");
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!(
                    "FAIL {} observed={} expected={} tolerance={}",
                    c.name, c.observed, c.expected, c.tolerance
                );
            }
            return Ok(report.pass);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
