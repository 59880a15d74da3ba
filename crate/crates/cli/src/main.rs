mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, Ctx};

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::usage(
                "invalid-threads",
                "--threads must be at least 1",
            ));
        }
        if !landau_core::exec::configure_threads(t) {
            log::warn!(
                "thread pool already configured or parallel support disabled; ignoring --threads"
            );
        }
    }
    let ctx = Ctx {
        physics: cli.physics,
        threads: cli.threads,
    };
    match &cli.command {
        Command::Density(a) => commands::density(&ctx, a)?,
        Command::Current(a) => commands::current(&ctx, a)?,
        Command::Expect(a) => commands::expect(&ctx, a)?,
        Command::Hall(a) => commands::hall(&ctx, a)?,
        Command::Zeeman(a) => commands::zeeman(&ctx, a)?,
        Command::Overlap(a) => commands::overlap(&ctx, a)?,
        Command::Verify(a) => return commands::verify(&ctx, a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
