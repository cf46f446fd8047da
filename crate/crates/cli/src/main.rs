mod args;
mod commands;
mod data;
mod error;
mod manifest;
mod render;

use std::fs;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;
use crate::manifest::{parse_manifest, Report, RunManifest};

fn manifest_for(command: &Command) -> Result<RunManifest, CliError> {
    let config = match command {
        Command::Ci(a) => commands::resolve_ci(a)?,
        Command::Table(a) => commands::resolve_table(a)?,
        Command::Ydist(a) => commands::resolve_ydist(a)?,
        Command::Bound(a) => commands::resolve_bound(a),
        Command::Weights(a) => commands::resolve_weights(a),
        Command::Coverage(a) => commands::resolve_coverage(a),
        Command::Refined(a) => commands::resolve_refined(a),
        Command::Replay(a) => {
            let text = fs::read_to_string(&a.manifest)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.manifest.display())))?;
            return parse_manifest(&text)
                .map_err(|e| CliError::Usage(format!("{}: not a report or manifest: {e}", a.manifest.display())));
        }
    };
    Ok(RunManifest::new(config))
}

fn run(cli: Cli) -> Result<String, CliError> {
    let manifest = manifest_for(&cli.command)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let result = pool.install(|| commands::execute(&manifest.config))?;
    let report = Report { manifest, result };
    if cli.text {
        Ok(render::text(&report))
    } else {
        serde_json::to_string_pretty(&report)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Usage(format!("serialization: {e}")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
