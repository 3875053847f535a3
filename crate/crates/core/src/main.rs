use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use poisson_bsc::cli::args::{resolve, Cli};
use poisson_bsc::cli::output::{render_csv, render_sidecar, sidecar_path, write_atomic};
use poisson_bsc::cli::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    let invocation = resolve(cli.command)?;
    let table = run(&invocation.spec)?;
    let csv = render_csv(&invocation.spec, &table);
    match &invocation.out {
        Some(path) => {
            write_atomic(path, &csv)?;
            write_atomic(&sidecar_path(path), &render_sidecar(&invocation.spec))?;
        }
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}
