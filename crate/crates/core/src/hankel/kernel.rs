//! The symbol kernel `Q_H(z, w)` of a half-plane Hankel operator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::szego_hp;
use crate::measure::HalfPlaneMeasure;
use crate::pick::resolvent_pair;
use crate::quadrature::{integrate, QuadOptions};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_upper(z: Complex64, w: Complex64) -> Result<()> {
    if !(z.im > 0.0 && w.im > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "kernel points must lie in the upper half-plane ({z}, {w})"
        )));
    }
    Ok(())
}

/// `(1/4 pi^2) int dmu(lambda) / ((lambda - i z)(lambda + i conj(w)))`.
pub fn symbol_kernel_measure(mu: &HalfPlaneMeasure, z: Complex64, w: Complex64) -> Result<Complex64> {
    check_upper(z, w)?;
    Ok(resolvent_pair(mu, -I * z, I * w.conj())? / (4.0 * PI * PI))
}

/// `<Q_z, h R Q_w> = int conj(Q_z(x)) h(x) Q_w(-x) dx` for a bounded symbol.
pub fn symbol_kernel_boundary<F: Fn(f64) -> Result<Complex64>>(
    h: F,
    z: Complex64,
    w: Complex64,
    opts: &QuadOptions,
) -> Result<Complex64> {
    check_upper(z, w)?;
    let f = |x: f64| -> Complex64 {
        let xc = Complex64::new(x, 0.0);
        let v = h(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        szego_hp(xc, z).conj() * v * szego_hp(-xc, w)
    };
    let breaks = [0.0, z.re, -w.re];
    let r = integrate(f, f64::NEG_INFINITY, f64::INFINITY, &breaks, opts)?;
    if !(r.value.re.is_finite() && r.value.im.is_finite()) {
        return Err(Error::InvalidArgument(
            "symbol could not be evaluated on the line".into(),
        ));
    }
    Ok(r.value)
}

/// `Q(z, i lambda) Q(i lambda, w)`, the kernel of `|Q_{i lambda}><Q_{i lambda}|`.
pub fn symbol_kernel_rank_one(lambda: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    check_upper(z, w)?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rank-one kernel needs lambda > 0, got {lambda}"
        )));
    }
    let p = I * lambda;
    Ok(szego_hp(z, p) * szego_hp(p, w))
}

/// Tolerances of the boundary-mode integral.
pub fn boundary_opts() -> QuadOptions {
    QuadOptions {
        max_panels: 100_000,
        ..QuadOptions::with_tol(1e-15, 1e-11)
    }
}

/// Mode selector for [`symbol_kernel`].
pub enum SymbolKernelMode<'a> {
    Measure(&'a HalfPlaneMeasure),
    Boundary(&'a dyn Fn(f64) -> Result<Complex64>),
    RankOne(f64),
}

pub fn symbol_kernel(mode: SymbolKernelMode<'_>, z: Complex64, w: Complex64) -> Result<Complex64> {
    match mode {
        SymbolKernelMode::Measure(mu) => symbol_kernel_measure(mu, z, w),
        SymbolKernelMode::Boundary(h) => symbol_kernel_boundary(h, z, w, &boundary_opts()),
        SymbolKernelMode::RankOne(lambda) => symbol_kernel_rank_one(lambda, z, w),
    }
}
