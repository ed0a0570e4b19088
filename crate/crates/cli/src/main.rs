use std::process::ExitCode;

use clap::Parser;
use keymine_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(outcome) if outcome.audits_passed => ExitCode::SUCCESS,
        Ok(_) => {
            log::error!("embedded audit failed; see the run manifest");
            ExitCode::from(3)
        }
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}
