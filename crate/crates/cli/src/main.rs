use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use ulamlab::config::{load_limits, threads_from_env};
use ulamlab::{execute, Cli, CliError};

fn run(cli: &Cli) -> Result<i32, CliError> {
    if let Some(threads) = threads_from_env()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let limits = load_limits(cli.config.as_deref())?;
    let (text, code) = execute(&cli.command, &limits)?;
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
