//! Contraction defects of the shift on positive Hankel data.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{certify, PositivityVerdict, POSITIVITY_TOL};
use crate::error::{Error, Result};
use crate::measure::{HalfPlaneMeasure, MomentVector};

/// Which semigroup is compressed.
#[derive(Debug, Clone, PartialEq)]
pub enum ContractionMode<'a> {
    /// Multiplication by `x` on polynomials of degree `< n`, against
    /// `[c_{j+k}]`: defect `c_{j+k} - c_{j+k+2}`.
    DiscShift { moments: &'a MomentVector, n: usize },
    /// Laplace Gram matrices `phi(t_j + t_k)` and `phi(t_j + t_k + 2s)`.
    HpGram {
        mu: &'a HalfPlaneMeasure,
        t_grid: &'a [f64],
        s: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionVerdict {
    Contraction,
    NotContraction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OSContractionReport {
    pub mode: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub verdict: ContractionVerdict,
}

pub fn contraction_check(mode: ContractionMode<'_>) -> Result<OSContractionReport> {
    match mode {
        ContractionMode::DiscShift { moments, n } => {
            if moments.len() < 2 * n + 1 {
                return Err(Error::Insufficient(format!(
                    "shift defect at order {n} needs {} moments, got {}",
                    2 * n + 1,
                    moments.len()
                )));
            }
            let c = &moments.values;
            let d = DMatrix::from_fn(n, n, |j, k| Complex64::new(c[j + k] - c[j + k + 2], 0.0));
            Ok(report("disc_shift", n, None, None, &d))
        }
        ContractionMode::HpGram { mu, t_grid, s } => {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument(format!("shift must be positive, got {s}")));
            }
            if t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                return Err(Error::InvalidArgument("t-grid points must be positive".into()));
            }
            let mut sorted = t_grid.to_vec();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument("t-grid has duplicate points".into()));
            }
            let n = t_grid.len();
            let mut d = DMatrix::<Complex64>::zeros(n, n);
            for j in 0..n {
                for k in j..n {
                    let t = t_grid[j] + t_grid[k];
                    let v = mu.laplace_transform(t)? - mu.laplace_transform(t + 2.0 * s)?;
                    d[(j, k)] = Complex64::new(v, 0.0);
                    d[(k, j)] = d[(j, k)];
                }
            }
            Ok(report("hp_gram", n, Some(t_grid.to_vec()), Some(s), &d))
        }
    }
}

fn report(
    mode: &str,
    n: usize,
    t_grid: Option<Vec<f64>>,
    shift: Option<f64>,
    d: &DMatrix<Complex64>,
) -> OSContractionReport {
    let cert = certify(d, POSITIVITY_TOL);
    OSContractionReport {
        mode: mode.to_string(),
        n,
        t_grid,
        shift,
        min_eigenvalue: cert.min_eigenvalue,
        tolerance: cert.tolerance,
        verdict: if cert.verdict == PositivityVerdict::Positive {
            ContractionVerdict::Contraction
        } else {
            ContractionVerdict::NotContraction
        },
    }
}
