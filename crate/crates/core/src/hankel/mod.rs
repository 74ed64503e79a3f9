//! Finite Hankel sections and their certification.
//!
//! A section built from moments holds the quadratic-form entries
//! `c_{j+k} = <z^j, H z^k>` taken in arc length on the circle; a section built
//! from a circle symbol holds operator-matrix entries (Fourier coefficients).
//! The two differ by the factor `2 pi` of the coefficient dictionary, and
//! [`HankelSection::to_convention`] converts between them.

mod contraction;
mod kernel;
mod symbol;
mod transport;

pub use contraction::{contraction_check, ContractionMode, ContractionVerdict, OSContractionReport};
pub use kernel::{
    boundary_opts, symbol_kernel, symbol_kernel_boundary, symbol_kernel_measure, symbol_kernel_rank_one,
    SymbolKernelMode,
};
pub use symbol::{disc_to_hp_symbol, hp_to_disc_symbol, hp_to_disc_symbol_samples, section_from_symbol_disc};
pub use transport::{
    constant_invisibility, polar_decomposition_check, verify_rp_transport, PolarReport, TransportProbe,
    TransportReport, BOUNDARY_DEPTH,
};

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::HardyCoeffs;
use crate::linalg::{hermitian_defect, hermitian_eigenvalues, spectral_norm};
use crate::measure::{DiscMeasure, MomentVector};

/// What the entries of a section mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryConvention {
    /// `<z^j, H z^k>` in the arc-length inner product.
    QuadraticForm,
    /// Matrix of `H` in the basis `z^n`.
    OperatorMatrix,
}

/// An `N x N` matrix whose entries depend only on `j + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSection {
    pub entries: DMatrix<Complex64>,
    pub convention: EntryConvention,
}

impl HankelSection {
    /// Builds `M[j][k] = seq[j + k + offset]`.
    pub fn from_sequence(seq: &[Complex64], n: usize, offset: usize, convention: EntryConvention) -> Result<Self> {
        let needed = if n == 0 { 0 } else { 2 * n - 1 + offset };
        if seq.len() < needed {
            return Err(Error::Insufficient(format!(
                "order {n} needs {needed} sequence entries, got {}",
                seq.len()
            )));
        }
        Ok(HankelSection {
            entries: DMatrix::from_fn(n, n, |j, k| seq[j + k + offset]),
            convention,
        })
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    /// Rescales to the requested convention (`QuadraticForm = 2 pi OperatorMatrix`).
    pub fn to_convention(&self, convention: EntryConvention) -> Self {
        let factor = match (self.convention, convention) {
            (EntryConvention::OperatorMatrix, EntryConvention::QuadraticForm) => 2.0 * PI,
            (EntryConvention::QuadraticForm, EntryConvention::OperatorMatrix) => 1.0 / (2.0 * PI),
            _ => 1.0,
        };
        HankelSection {
            entries: self.entries.map(|v| v * factor),
            convention,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.entries)
    }

    /// Largest deviation from `M[j][k+1] = M[j+1][k]`.
    pub fn hankel_defect(&self) -> f64 {
        let n = self.order();
        let mut d: f64 = 0.0;
        for j in 0..n.saturating_sub(1) {
            for k in 0..n - 1 {
                d = d.max((self.entries[(j, k + 1)] - self.entries[(j + 1, k)]).norm());
            }
        }
        d
    }

    /// Row-major CSV. Real sections print real parts only; otherwise each
    /// cell is `re+imi`.
    pub fn to_csv(&self) -> String {
        let real = self.entries.iter().all(|v| v.im == 0.0);
        let mut out = String::new();
        for j in 0..self.order() {
            let row: Vec<String> = (0..self.order())
                .map(|k| {
                    let v = self.entries[(j, k)];
                    if real {
                        format!("{:e}", v.re)
                    } else {
                        format!("{:e}{:+e}i", v.re, v.im)
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.order();
        let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|j| (0..n).map(|k| f(&self.entries[(j, k)])).collect())
                .collect()
        };
        serde_json::json!({
            "order": n,
            "convention": self.convention,
            "re": part(|v| v.re),
            "im": part(|v| v.im),
        })
    }
}

/// `M[j][k] = c_{j+k}`, quadratic-form convention.
pub fn section_from_moments(c: &MomentVector, n: usize) -> Result<HankelSection> {
    let seq: Vec<Complex64> = c.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    HankelSection::from_sequence(&seq, n, 0, EntryConvention::QuadraticForm)
}

/// Sections of the Hilbert matrix `1/(j + k + 1)`.
pub fn hilbert_section(n: usize) -> HankelSection {
    section_from_moments(&MomentVector::hilbert(2 * n), n).expect("enough moments")
}

/// `sum conj(a_j) b_k M[j][k]`.
pub fn quadratic_form(section: &HankelSection, a: &HardyCoeffs, b: &HardyCoeffs) -> Result<Complex64> {
    let n = section.order();
    if a.len() > n || b.len() > n {
        return Err(Error::InvalidArgument(format!(
            "coefficient vectors of length {} and {} exceed the order {n}",
            a.len(),
            b.len()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, aj) in a.coeffs.iter().enumerate() {
        for (k, bk) in b.coeffs.iter().enumerate() {
            acc += aj.conj() * bk * section.entries[(j, k)];
        }
    }
    Ok(acc)
}

/// `int conj(f(x)) g(x) dmu(x)` for polynomials, from the exact moments.
pub fn quadratic_form_measure(mu: &DiscMeasure, a: &HardyCoeffs, b: &HardyCoeffs) -> Result<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let deg = a.len() + b.len() - 1;
    let c = mu.moments(deg)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, aj) in a.coeffs.iter().enumerate() {
        for (k, bk) in b.coeffs.iter().enumerate() {
            acc += aj.conj() * bk * c.values[j + k];
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PositivityVerdict {
    Positive,
    Indefinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityCertificate {
    pub n: usize,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub verdict: PositivityVerdict,
}

/// Relative tolerance of the positivity test.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Certificate from a hermitian eigensolve: positive iff
/// `min_eig >= -tol (1 + |trace|)`.
pub fn positivity_certificate(section: &HankelSection) -> PositivityCertificate {
    certify(&section.entries, POSITIVITY_TOL)
}

pub(crate) fn certify(m: &DMatrix<Complex64>, tol: f64) -> PositivityCertificate {
    let n = m.nrows();
    let min_eigenvalue = hermitian_eigenvalues(m).first().copied().unwrap_or(0.0);
    let positive = min_eigenvalue >= -tol * (1.0 + m.trace().norm());
    PositivityCertificate {
        n,
        min_eigenvalue,
        tolerance: tol,
        verdict: if positive {
            PositivityVerdict::Positive
        } else {
            PositivityVerdict::Indefinite
        },
    }
}

/// Spectral norm by power iteration.
pub fn norm_estimate(section: &HankelSection) -> f64 {
    spectral_norm(&section.entries, 1e-15, 200_000)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportVerdict {
    #[serde(rename = "supported_in_[0,1]")]
    SupportedInUnitInterval,
    MassOnNegative,
    Inconclusive,
}

/// Sign test on the support: both `[c_{j+k}]` and the shifted `[c_{j+k+1}]`
/// positive means no mass on `[-1, 0)`.
pub fn support_sign_test(c: &MomentVector, n: usize) -> Result<SupportVerdict> {
    if c.len() < 2 * n {
        return Err(Error::Insufficient(format!(
            "support test at order {n} needs {} moments, got {}",
            2 * n,
            c.len()
        )));
    }
    let seq: Vec<Complex64> = c.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let base = HankelSection::from_sequence(&seq, n, 0, EntryConvention::QuadraticForm)?;
    let shifted = HankelSection::from_sequence(&seq, n, 1, EntryConvention::QuadraticForm)?;
    let base_ok = positivity_certificate(&base).verdict == PositivityVerdict::Positive;
    let shifted_ok = positivity_certificate(&shifted).verdict == PositivityVerdict::Positive;
    Ok(match (base_ok, shifted_ok) {
        (true, true) => SupportVerdict::SupportedInUnitInterval,
        (_, false) => SupportVerdict::MassOnNegative,
        (false, true) => SupportVerdict::Inconclusive,
    })
}
