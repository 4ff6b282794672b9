//! `fhfilter`: experiment drivers for the filtered Fourier-Hermite solver.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for numerical failures.

mod args;
mod output;
mod run;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("fhfilter: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
