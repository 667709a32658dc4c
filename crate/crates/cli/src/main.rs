mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

/// Failure classes and their process exit codes.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Usage(String),
    Contract(String),
    Parse(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Contract(_) => 3,
            CliError::Parse(_) => 4,
            CliError::Numerical(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m)
            | CliError::Usage(m)
            | CliError::Contract(m)
            | CliError::Parse(m)
            | CliError::Numerical(m) => m,
        }
    }
}

impl From<realqm_core::Error> for CliError {
    fn from(e: realqm_core::Error) -> Self {
        use realqm_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Format(_) | E::NonFinite(_) => CliError::Parse(msg),
            E::NoConvergence { .. } => CliError::Numerical(msg),
            E::DimensionMismatch { .. }
            | E::NotSquare { .. }
            | E::NotSkewSymmetric { .. }
            | E::InvalidArgument(_)
            | E::NoOscillatingSector { .. }
            | E::NonOrthogonalStates { .. } => CliError::Contract(msg),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
