//! Batch front-end: `stieltjes-realize <command> --job job.json [--out path] [--quiet]`.

mod commands;
mod error;
mod format;
mod job;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::error::CliError;
use crate::job::{Command, JobSpec};

#[derive(Parser, Debug)]
#[command(name = "stieltjes-realize", version, about = "Classify, restore and verify realizations of Stieltjes-like functions")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Job specification (JSON)
    #[arg(long)]
    job: PathBuf,
    /// Output path; overrides output.path in the job, stdout when neither is set
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress progress messages on stderr
    #[arg(long)]
    quiet: bool,
}

const EXIT_VERIFICATION_FAILED: u8 = 4;

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let text = fs::read_to_string(&cli.job).map_err(|source| CliError::Read { path: cli.job.clone(), source })?;
    let job = JobSpec::parse(&text)?;
    let artifact = commands::run(cli.command, &job)?;
    match cli.out.clone().or_else(|| job.output.path.clone()) {
        Some(path) => {
            fs::write(&path, &artifact.text).map_err(|source| CliError::Write { path: path.clone(), source })?;
            if !cli.quiet {
                eprintln!("{}: wrote {}", cli.command.name(), path.display());
            }
        }
        None => print!("{}", artifact.text),
    }
    Ok(artifact.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            if !cli.quiet {
                eprintln!("verify: realization residual exceeds tolerance");
            }
            ExitCode::from(EXIT_VERIFICATION_FAILED)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
