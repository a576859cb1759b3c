//! `isochron` command-line driver.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{abel, catalog, conditions, groebner, period, verify};
use report::{exit_code, Output};

#[derive(Parser)]
#[command(name = "isochron", version, about = "Isochronicity conditions, Gröbner bases, certificates and period scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Necessary isochronicity conditions of a system.
    Conditions(conditions::Args),
    /// Reduced Gröbner basis of an ideal file or a conditions report.
    Groebner(groebner::Args),
    /// Check a catalog family or a spec with certificates.
    Verify(verify::Args),
    /// Isochronous centers of the Abel family of degree n.
    Abel(abel::Args),
    /// Numerical period function over a range of amplitudes.
    Period(period::Args),
    /// Browse the shipped families.
    Catalog {
        #[command(subcommand)]
        action: catalog::Action,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let run = match &cli.command {
        Command::Conditions(a) => conditions::run(a),
        Command::Groebner(a) => groebner::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Abel(a) => abel::run(a),
        Command::Period(a) => period::run(a),
        Command::Catalog { action } => catalog::run(action),
    };
    let result = run.and_then(|out| match out {
        Output::Report(r) => r.finish(argv).write(cli.out.as_deref()),
        Output::Text(t, status) => report::write_text(&t, cli.out.as_deref()).map(|_| status),
    });
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
