//! The Pick function `kappa` of a half-line measure, the bounded symbol
//! `h_H(p) = (i/pi) int p/(lambda^2 + p^2) dmu`, and the Poisson superposition
//! `psi_mu`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{HalfPlaneMeasure, WidomReport};
use crate::quadrature::{fourier_cos_half_line, integrate, QuadOptions};
use crate::search::{log_grid, polished_sup};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `log(1 + u)` without cancellation for small `u`.
fn log1p(u: Complex64) -> Complex64 {
    let w = Complex64::new(1.0, 0.0) + u;
    if w == Complex64::new(1.0, 0.0) {
        u
    } else {
        w.ln() * u / (w - 1.0)
    }
}

/// `int dmu / ((lambda + a)(lambda + b))` for `Re a, Re b > 0`.
///
/// Constant-density pieces use the partial-fraction antiderivative
/// `log((lambda + a)/(lambda + b)) / (b - a)`.
pub fn resolvent_pair(mu: &HalfPlaneMeasure, a: Complex64, b: Complex64) -> Result<Complex64> {
    if !(a.re > 0.0 && b.re > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "resolvent pair needs Re a, Re b > 0 (a = {a}, b = {b})"
        )));
    }
    let mut acc: Complex64 = mu
        .atoms()
        .iter()
        .map(|at| at.mass / ((at.pos + a) * (at.pos + b)))
        .sum();
    let opts = QuadOptions::default();
    for p in mu.pieces() {
        if p.exponent == 0.0 {
            let d = a - b;
            let anti = |l: f64| -> Complex64 {
                if l.is_infinite() {
                    return Complex64::new(0.0, 0.0);
                }
                if d.norm() <= 1e-6 * (l + b).norm() {
                    // series of log(1 + d/(l+b)) / (-d), to fourth order
                    let t = d / (l + b);
                    return -(Complex64::new(1.0, 0.0) - t / 2.0 + t * t / 3.0 - t * t * t / 4.0) / (l + b);
                }
                log1p(d / (l + b)) / (-d)
            };
            acc += (anti(p.hi) - anti(p.lo)) * p.coeff;
        } else {
            let single = HalfPlaneMeasure::new(Vec::new(), vec![*p])?;
            acc += single.integrate_with_breaks(|l| 1.0 / ((l + a) * (l + b)), &[a.norm(), b.norm()], &opts)?;
        }
    }
    Ok(acc)
}

/// `kappa(z) = int [lambda/(1 + lambda^2) - 1/(z + lambda)] dmu(lambda)`.
pub fn kappa(mu: &HalfPlaneMeasure, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::OnBranchCut(z.to_string()));
    }
    if let Some(at) = mu.atoms().iter().find(|at| (z + at.pos).norm() < 1e-14) {
        return Err(Error::Pole(format!("z = {z} meets the atom at {}", at.pos)));
    }
    let mut acc: Complex64 = mu
        .atoms()
        .iter()
        .map(|at| at.mass * (at.pos / (1.0 + at.pos * at.pos) - 1.0 / (z + at.pos)))
        .sum();
    let opts = QuadOptions::default();
    for p in mu.pieces() {
        if p.exponent == 0.0 {
            // antiderivative log(1 + l^2)/2 - log(z + l), which tends to 0 at infinity
            let anti = |l: f64| -> Complex64 {
                if l.is_infinite() {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.5 * (l * l).ln_1p(), 0.0) - (z + l).ln()
                }
            };
            acc += (anti(p.hi) - anti(p.lo)) * p.coeff;
        } else {
            let single = HalfPlaneMeasure::new(Vec::new(), vec![*p])?;
            acc += single.integrate_with_breaks(|l| l / (1.0 + l * l) - 1.0 / (z + l), &[1.0, z.norm()], &opts)?;
        }
    }
    Ok(acc)
}

/// `h_H(p) = (i/pi) int p/(lambda^2 + p^2) dmu(lambda)`, purely imaginary.
pub fn symbol_h(mu: &HalfPlaneMeasure, p: f64) -> Result<Complex64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "symbol_h needs a finite nonzero argument, got {p}"
        )));
    }
    let mut acc: f64 = mu
        .atoms()
        .iter()
        .map(|at| at.mass * p / (at.pos * at.pos + p * p))
        .sum();
    let opts = QuadOptions::default();
    for piece in mu.pieces() {
        if piece.exponent == 0.0 {
            acc += piece.coeff * ((piece.hi / p).atan() - (piece.lo / p).atan());
        } else {
            let single = HalfPlaneMeasure::new(Vec::new(), vec![*piece])?;
            acc += single
                .integrate_with_breaks(|l| Complex64::new(p / (l * l + p * p), 0.0), &[p.abs()], &opts)?
                .re;
        }
    }
    Ok(I * (acc / PI))
}

/// `(1/pi) rho(R_+) + max(beta, gamma)/2`, an upper bound for `sup |h_H|`.
pub fn symbol_bound(widom: &WidomReport) -> Result<f64> {
    widom.require_bounded()?;
    Ok(widom.rho_total / PI + 0.5 * widom.beta.max(widom.gamma))
}

/// `psi_mu(x) = (1/pi) int lambda/(lambda^2 + x^2) dmu(lambda)`.
pub fn psi_mu(mu: &HalfPlaneMeasure, x: f64) -> Result<f64> {
    let mass = mu.total_mass();
    if !mass.is_finite() {
        return Err(Error::InvalidMeasure(
            "psi_mu needs a measure of finite total mass".into(),
        ));
    }
    if x == 0.0 && mu.pieces().iter().any(|p| p.lo == 0.0 && p.exponent <= 0.0) {
        return Ok(f64::INFINITY);
    }
    let v = mu.integrate_with_breaks(
        |l| Complex64::new(l / (l * l + x * x), 0.0),
        &[x.abs()],
        &QuadOptions::default(),
    )?;
    Ok(v.re / PI)
}

/// `int_R psi_mu(x) dx`, which equals the total mass.
pub fn psi_mu_total(mu: &HalfPlaneMeasure) -> Result<f64> {
    let opts = QuadOptions::with_tol(1e-12, 1e-9);
    let mut breaks: Vec<f64> = mu.breakpoints();
    breaks.push(1.0);
    let half = integrate(
        |x| Complex64::new(psi_mu(mu, x).unwrap_or(f64::NAN), 0.0),
        0.0,
        f64::INFINITY,
        &breaks,
        &opts,
    )?;
    Ok(2.0 * half.value.re)
}

/// `int_R e^{itx} psi_mu(x) dx`, which equals the Laplace transform at `t`.
pub fn psi_mu_fourier(mu: &HalfPlaneMeasure, t: f64) -> Result<f64> {
    let opts = QuadOptions::with_tol(1e-13, 1e-10);
    let v = fourier_cos_half_line(|x| Complex64::new(psi_mu(mu, x).unwrap_or(f64::NAN), 0.0), t, 40, &opts)?;
    Ok(2.0 * v.re)
}

/// Which boundary a set of symbol samples lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "boundary")]
pub enum SymbolDomain {
    /// Samples at real points `x`.
    Line,
    /// Samples at `e^{i theta}`; the grid stores `theta`.
    Circle { reflection: Reflection },
}

/// How a circle symbol acts: `P_+ h R P_+` with `R F(z) = conj(z) F(conj(z))`
/// (`Classical`), or with the plain flip `F(z) -> F(conj(z))` (`Involution`).
/// Matrix entries are `h^(j+k+1)` and `h^(j+k)` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reflection {
    Classical,
    Involution,
}

/// A boundary function sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSamples {
    pub domain: SymbolDomain,
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub sharp_symmetric: bool,
    pub sup_estimate: f64,
}

impl SymbolSamples {
    pub fn new(domain: SymbolDomain, grid: Vec<f64>, values: Vec<Complex64>, sharp_symmetric: bool) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        let sup_estimate = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(SymbolSamples {
            domain,
            grid,
            values,
            sharp_symmetric,
            sup_estimate,
        })
    }

    /// Samples `h` on the midpoint circle grid `theta_m = 2 pi (m + 1/2)/M`,
    /// which avoids `z = 1`.
    pub fn on_circle<F: Fn(Complex64) -> Complex64>(m: usize, reflection: Reflection, h: F) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "circle grids need an even size, got {m}"
            )));
        }
        let grid = circle_grid(m);
        let values = grid.iter().map(|&t| h(Complex64::from_polar(1.0, t))).collect();
        let mut s = Self::new(SymbolDomain::Circle { reflection }, grid, values, false)?;
        s.sharp_symmetric = s.sharp_defect() <= 1e-12 * s.sup_estimate.max(1.0);
        Ok(s)
    }

    /// Largest violation of `h^sharp = h`, comparing mirrored grid points.
    ///
    /// On the line the mirror of `x` is `-x`; on the circle it is `conj(z)`.
    /// Points without a mirror on the grid are skipped.
    pub fn sharp_defect(&self) -> f64 {
        let n = self.grid.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let j = n - 1 - i;
            let mirrored = match self.domain {
                SymbolDomain::Line => (self.grid[i] + self.grid[j]).abs() <= 1e-12 * self.grid[i].abs().max(1.0),
                SymbolDomain::Circle { .. } => (self.grid[i] + self.grid[j] - 2.0 * PI).abs() <= 1e-12,
            };
            if mirrored {
                worst = worst.max((self.values[i] - self.values[j].conj()).norm());
            }
        }
        worst
    }

    /// Samples of `h^sharp`: `conj(h(-x))` on the line, `conj(h(conj z))` on
    /// the circle. The grid must be mirror symmetric.
    pub fn sharp(&self) -> Result<Self> {
        let n = self.grid.len();
        let symmetric = (0..n).all(|i| {
            let j = n - 1 - i;
            match self.domain {
                SymbolDomain::Line => (self.grid[i] + self.grid[j]).abs() <= 1e-12 * self.grid[i].abs().max(1.0),
                SymbolDomain::Circle { .. } => (self.grid[i] + self.grid[j] - 2.0 * PI).abs() <= 1e-12,
            }
        });
        if !symmetric {
            return Err(Error::InvalidArgument("sharp needs a mirror-symmetric grid".into()));
        }
        let values = (0..n).map(|i| self.values[n - 1 - i].conj()).collect();
        Self::new(self.domain, self.grid.clone(), values, self.sharp_symmetric)
    }

    /// `p,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,re,im\n");
        for (x, v) in self.grid.iter().zip(&self.values) {
            let _ = writeln!(out, "{x:e},{:e},{:e}", v.re, v.im);
        }
        out
    }
}

/// `theta_m = 2 pi (m + 1/2) / M`.
pub fn circle_grid(m: usize) -> Vec<f64> {
    (0..m).map(|k| 2.0 * PI * (k as f64 + 0.5) / m as f64).collect()
}

/// `n` log-spaced points on `[lo, hi]` and their negatives, sorted.
pub fn symmetric_log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let pos = log_grid(lo, hi, n);
    let mut g: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    g.extend(pos);
    g
}

/// `h_H` on the symmetric log grid with `n` points per side.
pub fn sample_symbol_h(mu: &HalfPlaneMeasure, lo: f64, hi: f64, n: usize) -> Result<SymbolSamples> {
    let grid = symmetric_log_grid(lo, hi, n);
    let values = grid.par_iter().map(|&p| symbol_h(mu, p)).collect::<Result<Vec<_>>>()?;
    let mut s = SymbolSamples::new(SymbolDomain::Line, grid, values, true)?;
    s.sharp_symmetric = s.sharp_defect() == 0.0;
    Ok(s)
}

/// Grid size per side for the symbol supremum.
pub const SUP_GRID_POINTS: usize = 1024;

/// `sup_p |h_H(p)|` over `[1e-6, 1e6]` and its negative, refined around the
/// best probe. Returns `(p, sup)`.
pub fn symbol_sup(mu: &HalfPlaneMeasure) -> Result<(f64, f64)> {
    let mut probes = log_grid(1e-6, 1e6, SUP_GRID_POINTS);
    probes.extend(mu.breakpoints().into_iter().filter(|x| *x >= 1e-6 && *x <= 1e6));
    probes.sort_by(f64::total_cmp);
    probes.dedup();
    let f = |p: f64| symbol_h(mu, p).map(|v| v.norm());
    let values = probes.par_iter().map(|&p| f(p)).collect::<Result<Vec<_>>>()?;
    polished_sup(f, &probes, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{GridSpec, HalfPlanePiece, Measure};
    use approx::assert_relative_eq;

    fn delta1() -> HalfPlaneMeasure {
        HalfPlaneMeasure::atomic(&[(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn kappa_examples() {
        let m = delta1();
        assert_eq!(kappa(&m, Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let v = kappa(&m, I).unwrap();
        assert_relative_eq!(v.re, 0.0, epsilon = 1e-16);
        assert_relative_eq!(v.im, 0.5, epsilon = 1e-16);
        assert_eq!(
            kappa(&HalfPlaneMeasure::empty(), Complex64::new(3.0, -2.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(matches!(
            kappa(&m, Complex64::new(-1.0, 0.0)),
            Err(Error::OnBranchCut(_))
        ));
        assert!(kappa(&m, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn kappa_closed_form_matches_quadrature() {
        let leb = HalfPlaneMeasure::lebesgue(0.0, 1.0).unwrap();
        let z = Complex64::new(0.3, 0.8);
        let closed = kappa(&leb, z).unwrap();
        let quad = integrate(
            |l| l / (1.0 + l * l) - 1.0 / (z + l),
            0.0,
            1.0,
            &[],
            &QuadOptions::default(),
        )
        .unwrap()
        .value;
        assert!((closed - quad).norm() < 1e-13);
    }

    #[test]
    fn symbol_examples() {
        let m = delta1();
        assert_relative_eq!(symbol_h(&m, 1.0).unwrap().im, 1.0 / (2.0 * PI), epsilon = 1e-16);
        assert_relative_eq!(symbol_h(&m, -1.0).unwrap().im, -1.0 / (2.0 * PI), epsilon = 1e-16);
        let two = HalfPlaneMeasure::atomic(&[(1.0, 1.0), (3.0, 2.0)]).unwrap();
        let v = symbol_h(&two, 2.0).unwrap();
        assert_eq!(v.re, 0.0);
        assert_relative_eq!(v.im, 46.0 / 65.0 / PI, max_relative = 1e-15);
        assert!(symbol_h(&m, 0.0).is_err());
    }

    #[test]
    fn symbol_equals_imaginary_part_of_kappa() {
        let m = HalfPlaneMeasure::new(
            vec![crate::measure::Atom { pos: 2.0, mass: 0.5 }],
            vec![HalfPlanePiece::new(1.0, 0.5, 0.0, 3.0).unwrap()],
        )
        .unwrap();
        for &p in &[0.01, 0.7, 5.0, -2.0] {
            let h = symbol_h(&m, p).unwrap();
            let k = kappa(&m, Complex64::new(0.0, p)).unwrap();
            assert_relative_eq!(h.im, k.im / PI, max_relative = 1e-10);
        }
    }

    #[test]
    fn resolvent_pair_closed_form_matches_quadrature() {
        let leb = HalfPlaneMeasure::lebesgue(0.5, f64::INFINITY).unwrap();
        let (a, b) = (Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0));
        let closed = resolvent_pair(&leb, a, b).unwrap();
        let quad = integrate(
            |l| 1.0 / ((l + a) * (l + b)),
            0.5,
            f64::INFINITY,
            &[],
            &QuadOptions::default(),
        )
        .unwrap()
        .value;
        assert!((closed - quad).norm() < 1e-12);
        let near = resolvent_pair(&leb, a, a + 1e-9).unwrap();
        let exact = 1.0 / (0.5 + a);
        assert!((near - exact).norm() < 1e-8);
    }

    #[test]
    fn bound_examples() {
        let w = crate::measure::widom_check(&Measure::HalfPlane(delta1()), &GridSpec::default()).unwrap();
        assert_relative_eq!(symbol_bound(&w).unwrap(), 0.5 / PI + 0.25, epsilon = 1e-15);
        let (p, sup) = symbol_sup(&delta1()).unwrap();
        assert_relative_eq!(sup, 1.0 / (2.0 * PI), epsilon = 1e-12);
        assert_relative_eq!(p, 1.0, epsilon = 1e-6);
        let w =
            crate::measure::widom_check(&Measure::HalfPlane(HalfPlaneMeasure::empty()), &GridSpec::default()).unwrap();
        assert_eq!(symbol_bound(&w).unwrap(), 0.0);
    }

    #[test]
    fn psi_examples() {
        let m = delta1();
        assert_relative_eq!(psi_mu(&m, 0.0).unwrap(), 1.0 / PI, epsilon = 1e-16);
        assert_relative_eq!(psi_mu(&m, 1.0).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-16);
        assert_relative_eq!(psi_mu_total(&m).unwrap(), 1.0, max_relative = 1e-6);
        assert_relative_eq!(psi_mu_fourier(&m, 1.0).unwrap(), (-1.0f64).exp(), max_relative = 1e-6);
        assert!(psi_mu(&HalfPlaneMeasure::lebesgue(0.0, f64::INFINITY).unwrap(), 1.0).is_err());
    }

    #[test]
    fn samples_are_sharp_symmetric() {
        let s = sample_symbol_h(&delta1(), 1e-3, 1e3, 32).unwrap();
        assert!(s.sharp_symmetric);
        assert_eq!(s.sharp_defect(), 0.0);
        assert!(s.sup_estimate <= 1.0 / (2.0 * PI) + 1e-15);
        assert!(s.to_csv().starts_with("p,re,im\n"));
        let c = SymbolSamples::on_circle(16, Reflection::Classical, |z| z).unwrap();
        assert!(c.sharp_symmetric);
        let c = SymbolSamples::on_circle(16, Reflection::Classical, |z| I * z).unwrap();
        assert!(!c.sharp_symmetric);
        assert!(SymbolSamples::on_circle(15, Reflection::Classical, |z| z).is_err());
    }
}
