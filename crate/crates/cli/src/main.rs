use std::path::PathBuf;
use std::process::ExitCode;

use carleson_cli::{execute, Command, ReportConfig, SuiteStatus};
use clap::Parser;

/// Hankel-operator and Carleson-measure analysis of a measure spec.
#[derive(Debug, Parser)]
#[command(name = "carleson", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// Measure spec (JSON).
    #[arg(long)]
    spec: PathBuf,

    /// Section order.
    #[arg(long = "N", default_value_t = 64)]
    n: usize,

    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Overrides every residual tolerance.
    #[arg(long)]
    tol: Option<f64>,

    /// Symbol samples per side and coarse Widom probes.
    #[arg(long, default_value_t = 64)]
    grid: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = ReportConfig {
        spec: args.spec,
        command: args.command,
        n: args.n,
        grid: args.grid,
        out: args.out,
        tol: args.tol,
    };
    match execute(&cfg) {
        Ok(report) => {
            for s in &report.suites {
                let status = match s.status {
                    SuiteStatus::Pass => "pass",
                    SuiteStatus::Fail => "FAIL",
                    SuiteStatus::Skipped => "skipped",
                    SuiteStatus::Info => "info",
                };
                let residual = s.worst_residual.map_or(String::new(), |r| format!(" worst {r:e}"));
                let note = s.note.as_deref().map_or(String::new(), |n| format!(" ({n})"));
                eprintln!("{:<22} {status}{residual}{note}", s.name);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("carleson: a check exceeded its tolerance");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("carleson: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
