use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = loewner::cli::Cli::parse();
    match loewner::cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
