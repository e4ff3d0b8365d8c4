//! Scenario-driven law runner.
//!
//! Loads a JSON scenario, executes the selected suites, writes a structured
//! report (stdout or `--out`), and exits with
//! 0 = all laws within tolerance, 1 = some law failed (report still
//! written), 2 = scenario or I/O error.

mod runner;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::runner::Flags;
use crate::scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "fdq",
    about = "Law checker for free difference quotients, fully matricial functions and resolvent transforms",
    version
)]
struct Args {
    /// Scenario file (JSON)
    scenario: PathBuf,
    /// Run a single suite instead of the scenario's selection
    /// (gdq|corep|lift|resolvent|fm|dq|dualpos|utransform|all)
    #[arg(long)]
    suite: Option<String>,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Multiply every tolerance by this factor
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Enable finite-difference cross-checks in the dq suite
    #[arg(long)]
    verify_fd: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args) -> Result<bool, String> {
    if !(args.tol_scale.is_finite() && args.tol_scale > 0.0) {
        return Err("--tol-scale must be positive".into());
    }
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| format!("cannot read {}: {}", args.scenario.display(), e))?;
    let scenario: Scenario =
        serde_json::from_str(&text).map_err(|e| format!("invalid scenario: {}", e))?;
    let built = scenario.build()?;
    let flags = Flags {
        suite: args.suite.clone(),
        seed: args.seed,
        tol_scale: args.tol_scale,
        verify_fd: args.verify_fd,
    };
    let report = runner::run(&scenario, &built, &flags)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| format!("cannot serialize report: {}", e))?;
    match &args.out {
        Some(path) => std::fs::write(path, json.as_bytes())
            .map_err(|e| format!("cannot write {}: {}", path.display(), e))?,
        None => println!("{}", json),
    }
    for suite in &report.suites {
        eprintln!(
            "suite {:<12} {:>4} laws  {}",
            suite.suite,
            suite.laws.len(),
            if suite.passed { "ok" } else { "FAIL" }
        );
    }
    Ok(report.passed)
}
