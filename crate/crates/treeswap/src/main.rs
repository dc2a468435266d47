use std::process::ExitCode;

use treeswap::cli::{self, CliError};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let result = cli::parse(args).and_then(|(parsed, argv)| treeswap::commands::run(parsed.command, &argv));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("treeswap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
