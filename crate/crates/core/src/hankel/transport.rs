//! Transport of the Hankel form to the weighted space `H^2(|delta| dx)` and
//! its polar decomposition.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::{boundary_opts, symbol_kernel_boundary, symbol_kernel_measure};
use crate::error::{Error, Result};
use crate::kernels::szego_hp;
use crate::measure::HalfPlaneMeasure;
use crate::outer::{delta, g_from_delta};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportProbe {
    pub z: Complex64,
    pub w: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub constant_integral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportReport {
    pub max_residual: f64,
    pub max_constant_integral: f64,
    pub probes: Vec<TransportProbe>,
}

/// `|int conj(Q_z(x)) c Q_w(-x) dx|`, which vanishes for every constant.
pub fn constant_invisibility(c: f64, z: Complex64, w: Complex64) -> Result<f64> {
    Ok(symbol_kernel_boundary(|_| Ok(Complex64::new(c, 0.0)), z, w, &boundary_opts())?.norm())
}

/// Compares the measure-side kernel `Q_H(z, w)` with
/// `int conj(Q_z(x)) u(x) Q_w(-x) |delta(x)| dx`, `u = delta/|delta|`.
///
/// The residual is `|lhs - rhs| / max(|lhs|, |c| sqrt(Q(z,z) Q(w,w)))`, the
/// second term bounding the invisible constant part of the integrand.
pub fn verify_rp_transport(
    mu: &HalfPlaneMeasure,
    c: f64,
    probes: &[(Complex64, Complex64)],
) -> Result<TransportReport> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidArgument("the offset c must be nonzero".into()));
    }
    let weighted = |x: f64| -> Result<Complex64> {
        let d = delta(mu, c, x)?;
        let modulus = d.norm();
        Ok(d / modulus * modulus)
    };
    let mut out = Vec::with_capacity(probes.len());
    for &(z, w) in probes {
        let lhs = symbol_kernel_measure(mu, z, w)?;
        let rhs = symbol_kernel_boundary(weighted, z, w, &boundary_opts())?;
        let constant_integral = constant_invisibility(c, z, w)?;
        let scale = c.abs() * (szego_hp(z, z).norm() * szego_hp(w, w).norm()).sqrt();
        let residual = (lhs - rhs).norm() / lhs.norm().max(scale);
        out.push(TransportProbe {
            z,
            w,
            lhs,
            rhs,
            residual,
            constant_integral,
        });
    }
    Ok(TransportReport {
        max_residual: out.iter().map(|p| p.residual).fold(0.0, f64::max),
        max_constant_integral: out.iter().map(|p| p.constant_integral).fold(0.0, f64::max),
        probes: out,
    })
}

/// Depth at which boundary values of `g` are read.
pub const BOUNDARY_DEPTH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarReport {
    /// `max | |g*(x)|^2 - |delta(x)| | / |delta(x)|`.
    pub modulus_residual: f64,
    /// `max | |h(x)| - 1 |` for `h = delta / conj(g*)^2`.
    pub unimodular_defect: f64,
    /// `max |h(-x) - conj(h(x))|` over probes whose negatives are probes.
    pub sharp_defect: f64,
}

/// Checks `|g*|^2 = |delta|` and that `h = delta / conj(g*)^2` is unimodular
/// with `h^sharp = h`, with `g*(x) = g(x + i 1e-4)`.
pub fn polar_decomposition_check(mu: &HalfPlaneMeasure, c: f64, xs: &[f64]) -> Result<PolarReport> {
    let mut values = Vec::with_capacity(xs.len());
    let mut modulus_residual: f64 = 0.0;
    let mut unimodular_defect: f64 = 0.0;
    for &x in xs {
        let d = delta(mu, c, x)?;
        let g = g_from_delta(mu, c, Complex64::new(x, BOUNDARY_DEPTH))?;
        modulus_residual = modulus_residual.max((g.norm_sqr() - d.norm()).abs() / d.norm());
        let h = d / (g.conj() * g.conj());
        unimodular_defect = unimodular_defect.max((h.norm() - 1.0).abs());
        values.push((x, h));
    }
    let mut sharp_defect: f64 = 0.0;
    for &(x, h) in &values {
        if let Some(&(_, hm)) = values.iter().find(|(y, _)| *y == -x) {
            sharp_defect = sharp_defect.max((hm - h.conj()).norm());
        }
    }
    Ok(PolarReport {
        modulus_residual,
        unimodular_defect,
        sharp_defect,
    })
}
