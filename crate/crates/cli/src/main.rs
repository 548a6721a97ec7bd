mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use args::Cli;
use error::{CliError, Result};

/// Environment variable overriding the worker-pool size.
const WORKERS_ENV: &str = "SHGLAB_WORKERS";

fn configure_pool() -> Result<usize> {
    if let Ok(raw) = std::env::var(WORKERS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size worker pool: {e}")))?;
    }
    Ok(rayon::current_num_threads())
}

fn execute(cli: &Cli) -> Result<()> {
    let start = Instant::now();
    let workers = configure_pool()?;
    let validated = commands::validate(cli.command, &cli.config)?;
    std::fs::create_dir_all(&cli.config.out)?;

    let outcome = commands::run(cli.command, &cli.config, &validated);
    let mut summary = json!({
        "command": cli.command.name(),
        "version": shg_core::VERSION,
        "seed": cli.config.seed,
        "workers": workers,
        "config": cli.config,
    });
    let result = match outcome {
        Ok(report) => {
            report.table.write(&cli.config.out.join("data.csv"))?;
            summary["result"] = report.result;
            match report.failure {
                Some(msg) => Err(CliError::Numerical(msg)),
                None => Ok(()),
            }
        }
        Err(e) => Err(e),
    };
    if let Err(e) = &result {
        summary["error"] = json!({ "message": e.to_string(), "exit_code": e.exit_code() });
    }
    summary["wall_time_s"] = json!(start.elapsed().as_secs_f64());
    output::write_summary(&cli.config.out.join("summary.json"), &summary)?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shglab {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
