mod args;
mod commands;
mod error;
mod fields;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use error::CliError;
use output::{csv_of, error_block, json_text, ok_block, write_out};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let name = cli.command.name();
    let common = &cli.common;
    let outcome = commands::run(common, &cli.command).and_then(|(report, graph)| {
        let text = match common.format {
            Format::Json => json_text(&ok_block(name, graph, report.result.clone())),
            Format::Csv => csv_of(&report, name)?,
        };
        write_out(common.out.as_deref(), &text)?;
        match report.failures {
            0 => Ok(()),
            n => Err(CliError::ChecksFailed(n)),
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quadcalc {name}: {e}");
            // usage errors go to stderr only; failed checks already printed their block
            if !matches!(e, CliError::Usage(_) | CliError::ChecksFailed(_)) && common.format == Format::Json {
                print!("{}", json_text(&error_block(name, &e)));
            }
            ExitCode::from(e.exit_code())
        }
    }
}
