//! Batch front end: reads a measure spec, runs one analysis command and
//! writes a versioned JSON report.

mod analysis;
mod suites;

use std::io::Write;
use std::path::{Path, PathBuf};

use carleson::measure::{Domain, Measure, MeasureSpec, WidomReport};
use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use analysis::{Check, MomentSource, MomentTable, NormEntry, Residuals, Sections, SymbolReport};
pub use suites::{Suite, SuiteStatus};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "CARLESON_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Report,
    Widom,
    Symbol,
    KernelCheck,
    Positivity,
    Transport,
    VerifyAll,
}

impl Command {
    /// Commands that need a Widom-bounded half-plane measure.
    pub fn bounded_only(self) -> bool {
        matches!(self, Command::Symbol | Command::KernelCheck | Command::Transport)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub spec: PathBuf,
    pub command: Command,
    /// Section order.
    pub n: usize,
    /// Points per side of the symbol grid and coarse Widom probes.
    pub grid: usize,
    pub out: Option<PathBuf>,
    /// Overrides every residual tolerance.
    pub tol: Option<f64>,
}

impl ReportConfig {
    pub fn new(spec: impl Into<PathBuf>, command: Command) -> Self {
        ReportConfig {
            spec: spec.into(),
            command,
            n: 64,
            grid: 64,
            out: None,
            tol: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Config("N must be at least 1".into()));
        }
        if self.grid < 16 {
            return Err(CliError::Config(format!("grid must be at least 16, got {}", self.grid)));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub(crate) fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Numeric(#[from] carleson::Error),
}

impl CliError {
    /// 2 for unusable input, 3 for an unbounded measure on a bounded-only
    /// command, 4 for quadrature failure, 1 for output errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Write { .. } => 1,
            CliError::Read { .. } | CliError::Config(_) => 2,
            CliError::Numeric(carleson::Error::NotBounded(_)) => 3,
            CliError::Numeric(carleson::Error::Quadrature { .. }) => 4,
            CliError::Numeric(_) => 2,
        }
    }
}

/// The JSON document written by every command. Fields a command does not
/// compute are `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Command,
    /// SHA-256 of the spec file bytes, hex encoded.
    pub input_digest: String,
    pub domain: Domain,
    pub n: usize,
    pub widom: Option<WidomReport>,
    pub moments: Option<MomentTable>,
    pub sections: Option<Sections>,
    pub symbol: Option<SymbolReport>,
    pub residuals: Option<Residuals>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<Suite>,
    /// False when a residual exceeds its tolerance or a suite fails.
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Parsed spec together with the digest of its bytes.
pub struct Input {
    pub measure: Measure,
    pub digest: String,
}

pub fn load_spec(path: &Path) -> Result<Input, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|e| CliError::Numeric(carleson::Error::InvalidMeasure(format!("spec is not UTF-8: {e}"))))?;
    let measure = MeasureSpec::from_json(&text)?.into_measure()?;
    Ok(Input { measure, digest })
}

fn empty_report(cfg: &ReportConfig, input: &Input) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        command: cfg.command,
        input_digest: input.digest.clone(),
        domain: input.measure.domain(),
        n: cfg.n,
        widom: None,
        moments: None,
        sections: None,
        symbol: None,
        residuals: None,
        suites: Vec::new(),
        passed: true,
    }
}

/// Runs any command other than `verify-all`.
pub fn run_report(cfg: &ReportConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    if cfg.command == Command::VerifyAll {
        return run_verify(cfg);
    }
    let input = load_spec(&cfg.spec)?;
    let mut report = empty_report(cfg, &input);
    analysis::fill(cfg, &input.measure, &mut report)?;
    Ok(report)
}

/// Runs every suite applicable to the spec's domain.
pub fn run_verify(cfg: &ReportConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let input = load_spec(&cfg.spec)?;
    let mut report = empty_report(cfg, &input);
    let ran = suites::run_all(cfg, &input.measure)?;
    report.widom = Some(ran.widom);
    report.passed = ran.suites.iter().all(|s| s.status != SuiteStatus::Fail);
    report.suites = ran.suites;
    Ok(report)
}

/// Worker pool sized by [`THREADS_ENV`], or rayon's default when unset.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))
}

/// Runs the configured command on the worker pool and writes the report to
/// `cfg.out`, or to stdout when no path is given. Commands with tabular
/// output also write a CSV next to the report.
pub fn execute(cfg: &ReportConfig) -> Result<Report, CliError> {
    let pool = thread_pool()?;
    let report = pool.install(|| run_report(cfg))?;
    match &cfg.out {
        Some(path) => {
            write_atomic(path, report.to_json().as_bytes())?;
            if let Some((suffix, csv)) = analysis::csv_sidecar(cfg, &report)? {
                write_atomic(&path.with_extension(suffix), csv.as_bytes())?;
            }
        }
        None => print!("{}", report.to_json()),
    }
    Ok(report)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
