//! Report sections and the per-command drivers.

use carleson::hankel::{
    contraction_check, norm_estimate, positivity_certificate, section_from_moments, support_sign_test, symbol_kernel,
    verify_rp_transport, ContractionMode, OSContractionReport, PositivityCertificate, SupportVerdict, SymbolKernelMode,
};
use carleson::measure::{GridSpec, HalfPlaneMeasure, Measure, MomentVector, WidomReport};
use carleson::pick::{kappa, sample_symbol_h, symbol_bound, symbol_h, symbol_sup, SymbolSamples};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::{CliError, Command, Report, ReportConfig};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) const KERNEL_TOL: f64 = 1e-6;
pub(crate) const QUOTIENT_TOL: f64 = 1e-8;
pub(crate) const TRANSPORT_TOL: f64 = 1e-6;
pub(crate) const INVISIBILITY_TOL: f64 = 1e-8;
pub(crate) const TRANSPORT_CONSTANTS: [f64; 2] = [1.0, -2.0];
pub(crate) const NORM_ORDERS: [usize; 4] = [8, 16, 32, 64];
const SYMBOL_RANGE: (f64, f64) = (1e-3, 1e3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    Direct,
    CayleyPushforward,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentTable {
    pub source: MomentSource,
    /// `c_0, c_1, ...` of the disc measure.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEntry {
    pub n: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sections {
    pub order: usize,
    pub certificate: PositivityCertificate,
    pub norms: Vec<NormEntry>,
    pub support: SupportVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<OSContractionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolReport {
    pub samples: SymbolSamples,
    pub sup: f64,
    pub argsup: f64,
    pub bound: Option<f64>,
}

/// A residual against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(value: f64, tolerance: f64) -> Self {
        Check {
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Residuals {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_agreement: Option<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference_quotient: Option<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transport: Option<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_invisibility: Option<Check>,
}

impl Residuals {
    pub fn passed(&self) -> bool {
        [
            self.kernel_agreement,
            self.difference_quotient,
            self.transport,
            self.constant_invisibility,
        ]
        .iter()
        .flatten()
        .all(|c| c.passed)
    }
}

pub(crate) fn halfplane(measure: &Measure, command: &str) -> Result<HalfPlaneMeasure, CliError> {
    match measure {
        Measure::HalfPlane(mu) => Ok(mu.clone()),
        Measure::Disc(_) => {
            Err(carleson::Error::DomainMismatch(format!("{command} needs a half-plane measure")).into())
        }
    }
}

pub(crate) fn widom(cfg: &ReportConfig, measure: &Measure) -> Result<WidomReport, CliError> {
    Ok(carleson::measure::widom_check(
        measure,
        &GridSpec::with_points(cfg.grid),
    )?)
}

pub(crate) fn moments(measure: &Measure, count: usize) -> Result<MomentTable, CliError> {
    let (source, v) = match measure {
        Measure::Disc(m) => (MomentSource::Direct, m.moments(count)?),
        Measure::HalfPlane(m) => (MomentSource::CayleyPushforward, m.cayley_pushforward().moments(count)?),
    };
    let values = v.values.into_iter().map(|x| x + 0.0).collect();
    Ok(MomentTable { source, values })
}

/// `{0.5i, i, 2i, 1+i, -1+2i}` squared.
pub(crate) fn probe_grid() -> Vec<(Complex64, Complex64)> {
    let pts = [0.5 * I, I, 2.0 * I, 1.0 + I, -1.0 + 2.0 * I];
    pts.iter().flat_map(|&z| pts.iter().map(move |&w| (z, w))).collect()
}

/// Distinct ordered pairs from a fixed right-half-plane set.
pub(crate) fn right_pairs() -> Vec<(Complex64, Complex64)> {
    let pts = [
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(2.0, -1.0),
    ];
    pts.iter()
        .enumerate()
        .flat_map(|(i, &z)| {
            pts.iter()
                .enumerate()
                .filter(move |(j, _)| *j != i)
                .map(move |(_, &w)| (z, w))
        })
        .collect()
}

/// Largest `|Q_boundary - Q_measure| / max(|Q_measure|, 1e-12)` on the probe grid.
pub(crate) fn kernel_agreement(mu: &HalfPlaneMeasure) -> Result<f64, CliError> {
    let h = |x: f64| {
        if x == 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            symbol_h(mu, x)
        }
    };
    let worst = probe_grid()
        .par_iter()
        .map(|&(z, w)| -> carleson::Result<f64> {
            let m = symbol_kernel(SymbolKernelMode::Measure(mu), z, w)?;
            let b = symbol_kernel(SymbolKernelMode::Boundary(&h), z, w)?;
            Ok((b - m).norm() / m.norm().max(1e-12))
        })
        .collect::<carleson::Result<Vec<_>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// Largest relative defect of `(kappa(z) - kappa(w))/(z - w) = 4 pi^2 Q(iz, i conj w)`.
pub(crate) fn difference_quotient(mu: &HalfPlaneMeasure) -> Result<f64, CliError> {
    let four_pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut worst: f64 = 0.0;
    for (z, w) in right_pairs() {
        let dq = (kappa(mu, z)? - kappa(mu, w)?) / (z - w);
        let k = four_pi2 * symbol_kernel(SymbolKernelMode::Measure(mu), I * z, I * w.conj())?;
        let scale = k.norm();
        worst = worst.max(if scale == 0.0 {
            dq.norm()
        } else {
            (dq - k).norm() / scale
        });
    }
    Ok(worst)
}

/// Worst transport residual and invisibility integral over both constants.
pub(crate) fn transport(mu: &HalfPlaneMeasure) -> Result<(f64, f64), CliError> {
    let probes = probe_grid();
    let mut residual: f64 = 0.0;
    let mut invisible: f64 = 0.0;
    for c in TRANSPORT_CONSTANTS {
        let r = verify_rp_transport(mu, c, &probes)?;
        residual = residual.max(r.max_residual);
        invisible = invisible.max(r.max_constant_integral);
    }
    Ok((residual, invisible))
}

fn symbol_report(cfg: &ReportConfig, mu: &HalfPlaneMeasure, w: &WidomReport) -> Result<SymbolReport, CliError> {
    let samples = sample_symbol_h(mu, SYMBOL_RANGE.0, SYMBOL_RANGE.1, cfg.grid)?;
    let (argsup, sup) = symbol_sup(mu)?;
    let bound = if w.is_bounded() { Some(symbol_bound(w)?) } else { None };
    Ok(SymbolReport {
        samples,
        sup,
        argsup,
        bound,
    })
}

fn sections(n: usize, table: &MomentTable, orders: &[usize], contraction: bool) -> Result<Sections, CliError> {
    let c = MomentVector::new(table.values.clone());
    let certificate = positivity_certificate(&section_from_moments(&c, n)?);
    let norms = orders
        .iter()
        .map(|&k| {
            Ok(NormEntry {
                n: k,
                norm: norm_estimate(&section_from_moments(&c, k)?),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let support = support_sign_test(&c, n)?;
    let contraction = if contraction {
        Some(contraction_check(ContractionMode::DiscShift { moments: &c, n })?)
    } else {
        None
    };
    Ok(Sections {
        order: n,
        certificate,
        norms,
        support,
        contraction,
    })
}

pub(crate) fn fill(cfg: &ReportConfig, measure: &Measure, report: &mut Report) -> Result<(), CliError> {
    let n = cfg.n;
    match cfg.command {
        Command::Widom => report.widom = Some(widom(cfg, measure)?),
        Command::Positivity => {
            let table = moments(measure, 2 * n)?;
            report.sections = Some(sections(n, &table, &[n], false)?);
            report.moments = Some(table);
        }
        Command::Symbol => {
            let mu = halfplane(measure, "symbol")?;
            let w = widom(cfg, measure)?;
            w.require_bounded()?;
            let s = symbol_report(cfg, &mu, &w)?;
            report.passed = s.bound.is_some_and(|b| s.sup <= b);
            report.symbol = Some(s);
            report.widom = Some(w);
        }
        Command::KernelCheck => {
            let mu = halfplane(measure, "kernel-check")?;
            let w = widom(cfg, measure)?;
            w.require_bounded()?;
            let r = Residuals {
                kernel_agreement: Some(Check::new(kernel_agreement(&mu)?, cfg.tol_or(KERNEL_TOL))),
                difference_quotient: Some(Check::new(difference_quotient(&mu)?, cfg.tol_or(QUOTIENT_TOL))),
                ..Residuals::default()
            };
            report.passed = r.passed();
            report.residuals = Some(r);
            report.widom = Some(w);
        }
        Command::Transport => {
            let mu = halfplane(measure, "transport")?;
            let w = widom(cfg, measure)?;
            w.require_bounded()?;
            let (res, inv) = transport(&mu)?;
            let r = Residuals {
                transport: Some(Check::new(res, cfg.tol_or(TRANSPORT_TOL))),
                constant_invisibility: Some(Check::new(inv, cfg.tol_or(INVISIBILITY_TOL))),
                ..Residuals::default()
            };
            report.passed = r.passed();
            report.residuals = Some(r);
            report.widom = Some(w);
        }
        Command::Report => {
            let w = widom(cfg, measure)?;
            let table = moments(measure, (2 * n + 1).max(2 * NORM_ORDERS[3]))?;
            report.sections = Some(sections(n, &table, &NORM_ORDERS, true)?);
            report.moments = Some(table);
            if let (Measure::HalfPlane(mu), true) = (measure, w.is_bounded()) {
                report.symbol = Some(symbol_report(cfg, mu, &w)?);
                let r = Residuals {
                    kernel_agreement: Some(Check::new(kernel_agreement(mu)?, cfg.tol_or(KERNEL_TOL))),
                    ..Residuals::default()
                };
                report.passed = r.passed();
                report.residuals = Some(r);
            }
            report.widom = Some(w);
        }
        Command::VerifyAll => unreachable!("verify-all is handled by run_verify"),
    }
    Ok(())
}

/// Extra CSV output: symbol samples for `symbol`, the section for `positivity`.
pub(crate) fn csv_sidecar(cfg: &ReportConfig, report: &Report) -> Result<Option<(&'static str, String)>, CliError> {
    Ok(match (cfg.command, &report.symbol, &report.moments) {
        (Command::Symbol, Some(s), _) => Some(("symbol.csv", s.samples.to_csv())),
        (Command::Positivity, _, Some(t)) => {
            let section = section_from_moments(&MomentVector::new(t.values.clone()), cfg.n)?;
            Some(("section.csv", section.to_csv()))
        }
        _ => None,
    })
}
