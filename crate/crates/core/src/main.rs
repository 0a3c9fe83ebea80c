use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use coarse_rigidity::cli::{self, CliError, Scenario, EXIT_CHECK_FAILED, EXIT_IO, EXIT_PASS};

#[derive(Parser)]
#[command(version, about = "Recover coarse equivalences from isometries between finite spaces")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the scenario's spaces, isometry and ground truth as JSON.
    Generate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one or more scenarios (concurrently) and write their reports.
    Run {
        #[arg(long, required = true)]
        scenario: Vec<PathBuf>,
        /// Output directory; with several scenarios, one subdirectory each.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Fail scenarios with no checks or with skipped stages.
        #[arg(long)]
        strict: bool,
    },
    /// Re-run a scenario and compare with `OUT/report.json`, ignoring timing.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        strict: bool,
    },
    /// Field-level differences between two reports, ignoring timing.
    Diff { left: PathBuf, right: PathBuf },
}

fn load(path: &Path, seed: Option<u64>) -> Result<Scenario, CliError> {
    let mut s = Scenario::load(path)?;
    if let Some(seed) = seed {
        s.seed = seed;
    }
    Ok(s)
}

fn read_value(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

fn run_one(path: &Path, out: Option<&Path>, seed: Option<u64>, strict: bool) -> Result<i32, CliError> {
    let scenario = load(path, seed)?;
    let report = cli::run(&scenario, strict)?;
    if let Some(out) = out {
        cli::write_outputs(&report, out)?;
    }
    let v = &report.verdict;
    match &v.first_failing_stage {
        Some(stage) => eprintln!("{}: stage {stage} failed (exit {})", scenario.name, v.exit_code),
        None => eprintln!("{}: exit {}", scenario.name, v.exit_code),
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("  check failed: {:?}: {}", c.check, c.detail);
    }
    Ok(v.exit_code)
}

fn main_inner(args: Args) -> Result<i32, CliError> {
    match args.command {
        Command::Generate { scenario, out, seed } => {
            for path in cli::generate(&load(&scenario, seed)?, &out)? {
                println!("{}", path.display());
            }
            Ok(EXIT_PASS)
        }
        Command::Run {
            scenario,
            out,
            seed,
            strict,
        } => {
            let batch = scenario.len() > 1;
            let codes: Vec<i32> = scenario
                .par_iter()
                .map(|path| {
                    let dir = out.as_ref().map(|o| {
                        if batch {
                            o.join(path.file_stem().unwrap_or_default())
                        } else {
                            o.clone()
                        }
                    });
                    run_one(path, dir.as_deref(), seed, strict).unwrap_or_else(|e| {
                        eprintln!("{}: {e}", path.display());
                        e.exit_code()
                    })
                })
                .collect();
            Ok(codes.into_iter().max().unwrap_or(EXIT_PASS))
        }
        Command::Verify {
            scenario,
            out,
            seed,
            strict,
        } => {
            let saved = read_value(&out.join("report.json"))?;
            let report = cli::run(&load(&scenario, seed)?, strict)?;
            let fresh = serde_json::to_value(&report).expect("reports serialize");
            let diff = cli::report_diff(&saved, &fresh)?;
            for d in &diff {
                println!("{}: {} -> {}", d.path, d.left, d.right);
            }
            Ok(if diff.is_empty() { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Diff { left, right } => {
            let diff = cli::report_diff(&read_value(&left)?, &read_value(&right)?)?;
            println!("{}", serde_json::to_string_pretty(&diff).expect("diff serializes"));
            Ok(if diff.is_empty() { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let code = main_inner(Args::parse()).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_IO
    });
    ExitCode::from(code as u8)
}
