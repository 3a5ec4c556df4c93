//! `catpursuit` command-line runner.
//!
//! Exit status: 0 when every requested check passes, 1 when any check
//! fails, 2 on configuration or engine errors.

use std::path::PathBuf;
use std::process::ExitCode;

use catpursuit::scenario::{
    applicable_checks, emit_plot, read_trace, run_batch, run_checks, run_scenario, BatchSpec, CheckKind, Outcome,
    RunSummary, ScenarioConfig, OUT_DIR_ENV,
};
use catpursuit::verify::CheckReport;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "catpursuit", version, about = "Simple pursuit in CAT(K) domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its artifacts.
    Run {
        scenario: PathBuf,
        /// Output directory (takes precedence over the scenario file).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run every scenario of a sweep file.
    Batch {
        sweep: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-run checks on a trace CSV (and the `.trace.json` next to it).
    Verify {
        trace: PathBuf,
        /// Checks to run; defaults to every check that applies to the trace.
        #[arg(short, long = "check")]
        checks: Vec<CheckKind>,
    },
    /// Draw a planar trace as SVG.
    Plot { trace: PathBuf, output: PathBuf },
}

enum Failure {
    Checks,
    Engine(catpursuit::Error),
}

impl From<catpursuit::Error> for Failure {
    fn from(e: catpursuit::Error) -> Self {
        Failure::Engine(e)
    }
}

fn print_checks(checks: &[CheckReport]) {
    for c in checks {
        let status = if c.passed { "ok  " } else { "FAIL" };
        match &c.error {
            Some(e) => println!("  {status} {:<20} {e}", c.name),
            None => println!(
                "  {status} {:<20} worst {:.3e} (tolerance {:.1e})",
                c.name, c.worst, c.tolerance
            ),
        }
    }
}

fn print_summary(s: &RunSummary) {
    let outcome = match &s.outcome {
        Outcome::Capture { step } => format!("capture at step {step}"),
        Outcome::Escape { l_n, settled, .. } => {
            format!("escape, L_N = {l_n:.6}{}", if *settled { "" } else { " (not settled)" })
        }
        Outcome::Undetermined { reason } => format!("undetermined: {reason}"),
    };
    println!("{}: {outcome}, {} steps, L_0 = {:.6}", s.name, s.steps, s.l0);
    if let Some(c) = s.sqrt_constant {
        println!("  sqrt bound constant C = {c:.6e}");
    }
    print_checks(&s.checks);
    if let Some(p) = &s.artifacts.summary {
        println!("  summary: {}", p.display());
    }
}

fn status(passed: bool) -> Result<(), Failure> {
    if passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { scenario, out } => {
            let mut cfg = ScenarioConfig::load(&scenario)?;
            if std::env::var_os(OUT_DIR_ENV).is_none() && out.is_some() {
                cfg.output_dir = out;
            }
            let summary = run_scenario(&cfg)?;
            print_summary(&summary);
            status(summary.passed)
        }
        Command::Batch { sweep, out } => {
            let mut configs = BatchSpec::load(&sweep)?;
            if std::env::var_os(OUT_DIR_ENV).is_none() && out.is_some() {
                configs.iter_mut().for_each(|c| c.output_dir = out.clone());
            }
            let report = run_batch(&configs)?;
            print!("{}", report.table());
            for row in &report.rows {
                if let Some(s) = row.summary.as_ref().filter(|s| !s.passed) {
                    println!("{}:", s.name);
                    print_checks(&s.checks);
                }
            }
            if report.rows.iter().any(|r| r.error.is_some()) {
                return Err(Failure::Engine(catpursuit::Error::Io("one or more runs failed".into())));
            }
            status(report.passed())
        }
        Command::Verify { trace, checks } => {
            let trace = read_trace(&trace)?;
            let checks = if checks.is_empty() {
                applicable_checks(&trace)
            } else {
                checks
            };
            let reports = run_checks(&trace, &checks);
            println!(
                "{} steps, L_0 = {:.6}, L_N = {:.6}",
                trace.len(),
                trace.separation[0],
                trace.separation[trace.len()]
            );
            print_checks(&reports);
            status(reports.iter().all(|r| r.passed))
        }
        Command::Plot { trace, output } => {
            let trace = read_trace(&trace)?;
            emit_plot(&trace, &output)?;
            println!("wrote {}", output.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
