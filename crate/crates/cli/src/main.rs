mod args;
mod commands;
mod error;
mod load;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn out_path(command: &Command) -> Option<&std::path::Path> {
    let common = match command {
        Command::Validate(c) => c,
        Command::Query { common, .. } | Command::Capabilities { common, .. } => common,
        Command::Inputs(a) | Command::Criteria(a) | Command::Influences(a) => &a.common,
        Command::Plan(p) | Command::Whatif { plan: p, .. } => &p.common,
    };
    common.out.as_deref()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    let written = match out_path(&cli.command) {
        Some(path) => std::fs::write(path, &output.stdout).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(output.code)
}
