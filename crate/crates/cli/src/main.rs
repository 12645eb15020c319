use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = lim_cli::Cli::parse();
    match lim_cli::cli::execute(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
