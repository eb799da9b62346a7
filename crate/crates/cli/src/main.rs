//! Batch driver for the qboundary experiments.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or a file cannot be
//! written, 2 on a usage or configuration error.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::coset::CosetArgs;
use commands::fusion::FusionArgs;
use commands::hecke::HeckeArgs;
use commands::walk::WalkArgs;
use commands::Run;
use config::UsageError;

#[derive(Parser, Debug)]
#[command(name = "qboundary", version, about = "Exact experiments on random walks over SU_q(n) duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fusion tables, zero-weight dimensions and the multiplicity bound.
    Fusion(FusionArgs),
    /// The central random walk: kernel, exact laws, eigenfunction and sampled paths.
    Walk(WalkArgs),
    /// The double-coset chain of SU_q(2): eigenvector certificate and measure evolution.
    Coset(CosetArgs),
    /// Hecke relations for the tensor-chain representations.
    Hecke(HeckeArgs),
    /// Recompute the embedded sha256 of previously written files.
    Verify {
        #[arg(required = true)]
        files: Vec<std::path::PathBuf>,
    },
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let run: Run = match &cli.command {
        Command::Fusion(args) => commands::fusion::run(args)?,
        Command::Walk(args) => commands::walk::run(args)?,
        Command::Coset(args) => commands::coset::run(args)?,
        Command::Hecke(args) => commands::hecke::run(args)?,
        Command::Verify { files } => return verify(files),
    };
    let files = output::write_outcome(&run.out, &run.config, run.format, &run.outcome)?;
    for check in &run.outcome.checks {
        let status = match check.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        println!("{status} {}", check.check);
    }
    println!("wrote {} files to {}", files.len(), run.out.display());
    Ok(run.outcome.all_passed())
}

fn verify(files: &[std::path::PathBuf]) -> anyhow::Result<bool> {
    let mut all = true;
    for path in files {
        let bytes = std::fs::read(path)
            .map_err(|e| config::usage(format!("cannot read {}: {e}", path.display())))?;
        let ok = output::verify_file(&bytes).unwrap_or(false);
        println!("{} {}", if ok { "PASS" } else { "FAIL" }, path.display());
        all &= ok;
    }
    Ok(all)
}

fn is_usage(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.is::<UsageError>()
            || matches!(
                e.downcast_ref::<qboundary::Error>(),
                Some(
                    qboundary::Error::Domain(_)
                        | qboundary::Error::Parse { .. }
                        | qboundary::Error::RankMismatch { .. }
                        | qboundary::Error::SizeMismatch { .. }
                )
            )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_usage(&err) { 2 } else { 1 })
        }
    }
}
