//! Circle symbols: Fourier sections and the transfer of half-plane symbols
//! through the Cayley transform.

use num_complex::Complex64;

use super::{EntryConvention, HankelSection};
use crate::error::{Error, Result};
use crate::pick::{circle_grid, Reflection, SymbolDomain, SymbolSamples};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `h^(n) = (1/M) sum_m h(e^{i theta_m}) e^{-i n theta_m}` on the sample grid.
fn fourier_coefficient(h: &SymbolSamples, n: i64) -> Complex64 {
    let m = h.values.len() as f64;
    h.grid
        .iter()
        .zip(&h.values)
        .map(|(&t, &v)| v * Complex64::from_polar(1.0, -(n as f64) * t))
        .sum::<Complex64>()
        / m
}

/// Operator-matrix section of the Hankel operator with circle symbol `h`:
/// entries `h^(j+k+1)` for the classical reflection, `h^(j+k)` for the
/// involution.
pub fn section_from_symbol_disc(h: &SymbolSamples, n: usize) -> Result<HankelSection> {
    let SymbolDomain::Circle { reflection } = h.domain else {
        return Err(Error::DomainMismatch(
            "section_from_symbol_disc needs circle samples".into(),
        ));
    };
    let m = h.values.len();
    if m < 8 * n {
        return Err(Error::InvalidArgument(format!(
            "grid of {m} points is below the aliasing guard 8N = {}",
            8 * n
        )));
    }
    let expected = circle_grid(m);
    if h.grid.iter().zip(&expected).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(Error::InvalidArgument(
            "circle samples must sit on the midpoint grid".into(),
        ));
    }
    let offset = match reflection {
        Reflection::Classical => 1,
        Reflection::Involution => 0,
    };
    let len = if n == 0 { 0 } else { 2 * n - 1 + offset };
    let seq: Vec<Complex64> = (0..len).map(|k| fourier_coefficient(h, k as i64)).collect();
    HankelSection::from_sequence(&seq, n, offset, EntryConvention::OperatorMatrix)
}

/// `omega(e^{i theta}) = -cot(theta / 2)`, real for `theta` off `0 mod 2 pi`.
fn boundary_omega(theta: f64) -> f64 {
    -1.0 / (0.5 * theta).tan()
}

/// `k(z) = -delta(omega(z)) conj(z)` sampled on the `m`-point midpoint grid.
///
/// The result uses the involution convention, under which the section of
/// `k` carries the same operator as the half-plane symbol `delta`.
pub fn hp_to_disc_symbol<F: Fn(f64) -> Result<Complex64>>(delta: F, m: usize) -> Result<SymbolSamples> {
    if m == 0 || !m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "circle grids need an even size, got {m}"
        )));
    }
    let grid = circle_grid(m);
    let values = grid
        .iter()
        .map(|&t| Ok(-delta(boundary_omega(t))? * Complex64::from_polar(1.0, -t)))
        .collect::<Result<Vec<_>>>()?;
    let mut s = SymbolSamples::new(
        SymbolDomain::Circle {
            reflection: Reflection::Involution,
        },
        grid,
        values,
        false,
    )?;
    s.sharp_symmetric = s.sharp_defect() <= 1e-12 * s.sup_estimate.max(1.0);
    Ok(s)
}

/// As [`hp_to_disc_symbol`], reading `delta` from line samples by linear
/// interpolation; circle nodes outside the sampled range are rejected.
pub fn hp_to_disc_symbol_samples(delta: &SymbolSamples, m: usize) -> Result<SymbolSamples> {
    if delta.domain != SymbolDomain::Line {
        return Err(Error::DomainMismatch("hp_to_disc_symbol needs line samples".into()));
    }
    let g = &delta.grid;
    if g.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "line samples must be strictly increasing".into(),
        ));
    }
    hp_to_disc_symbol(
        |x| {
            let i = g.partition_point(|&p| p < x);
            if i < g.len() && g[i] == x {
                return Ok(delta.values[i]);
            }
            if i == 0 || i == g.len() {
                return Err(Error::Insufficient(format!("no line samples around x = {x}")));
            }
            let t = (x - g[i - 1]) / (g[i] - g[i - 1]);
            Ok(delta.values[i - 1] * (1.0 - t) + delta.values[i] * t)
        },
        m,
    )
}

/// `h(x) = k(omega^{-1}(x)) (i - x)/(i + x)` at the line images of the circle
/// grid, which inverts [`hp_to_disc_symbol`].
pub fn disc_to_hp_symbol(k: &SymbolSamples) -> Result<SymbolSamples> {
    if !matches!(k.domain, SymbolDomain::Circle { .. }) {
        return Err(Error::DomainMismatch("disc_to_hp_symbol needs circle samples".into()));
    }
    let grid: Vec<f64> = k.grid.iter().map(|&t| boundary_omega(t)).collect();
    let values = grid
        .iter()
        .zip(&k.values)
        .map(|(&x, &v)| v * (I - x) / (I + x))
        .collect();
    let mut s = SymbolSamples::new(SymbolDomain::Line, grid, values, false)?;
    s.sharp_symmetric = s.sharp_defect() <= 1e-12 * s.sup_estimate.max(1.0);
    Ok(s)
}
