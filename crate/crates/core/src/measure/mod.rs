//! Finitely presented positive measures on the half line `(0, inf)` and on the
//! interval `(-1, 1)`.
//!
//! A measure is a finite list of point masses plus power-law density pieces.
//! Moments, cumulative masses and `rho`-integrals have closed forms wherever
//! the piece is a single power; everything else goes through
//! [`crate::quadrature`] with the endpoint power absorbed into the change of
//! variables.

mod spec;
mod widom;

pub use spec::{AtomSpec, Base, Bound, DensitySpec, MeasureSpec};
pub use widom::{widom_check, GridSpec, Sup, WidomReport, WidomVerdict};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_endpoint_powers, QuadOptions};

/// Default cap on moment indices.
pub const MOMENT_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Disc,
    #[serde(rename = "halfplane")]
    HalfPlane,
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Domain::Disc => "disc",
            Domain::HalfPlane => "halfplane",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub pos: f64,
    pub mass: f64,
}

/// Density `coeff * lambda^exponent` on `[lo, hi]`, `hi` possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePiece {
    pub coeff: f64,
    pub exponent: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Density `coeff * x^x_exp * (1-x)^one_minus_exp * (1+x)^one_plus_exp` on
/// `[lo, hi]`.
///
/// The single-factor cases are the power pieces of the input format; two
/// factors appear as Cayley images of half-line power pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPiece {
    pub coeff: f64,
    pub x_exp: f64,
    pub one_minus_exp: f64,
    pub one_plus_exp: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HalfPlaneMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<HalfPlanePiece>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<DiscPiece>,
}

/// Either kind of measure, as read from a spec file.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Disc(DiscMeasure),
    HalfPlane(HalfPlaneMeasure),
}

impl Measure {
    pub fn domain(&self) -> Domain {
        match self {
            Measure::Disc(_) => Domain::Disc,
            Measure::HalfPlane(_) => Domain::HalfPlane,
        }
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions::default()
}

fn moment_quad_opts() -> QuadOptions {
    QuadOptions::default().graded(48)
}

fn check_atom(a: &Atom, lo: f64, hi: f64) -> Result<()> {
    if !(a.mass > 0.0 && a.mass.is_finite()) {
        return Err(Error::InvalidMeasure(format!(
            "atom mass must be positive and finite, got {}",
            a.mass
        )));
    }
    if !(a.pos > lo && a.pos < hi) {
        return Err(Error::InvalidMeasure(format!(
            "atom position {} outside the open interval ({lo}, {hi})",
            a.pos
        )));
    }
    Ok(())
}

impl HalfPlanePiece {
    pub fn new(coeff: f64, exponent: f64, lo: f64, hi: f64) -> Result<Self> {
        let p = HalfPlanePiece {
            coeff,
            exponent,
            lo,
            hi,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.coeff > 0.0 && self.coeff.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "density coefficient must be positive, got {}",
                self.coeff
            )));
        }
        if !self.exponent.is_finite() {
            return Err(Error::InvalidMeasure("density exponent must be finite".into()));
        }
        if !(self.lo >= 0.0 && self.lo.is_finite() && self.hi > self.lo) {
            return Err(Error::InvalidMeasure(format!(
                "density support [{}, {}] must satisfy 0 <= lo < hi",
                self.lo, self.hi
            )));
        }
        if self.lo == 0.0 && self.exponent <= -1.0 {
            return Err(Error::InvalidMeasure(format!(
                "exponent {} <= -1 makes rho infinite near 0",
                self.exponent
            )));
        }
        if self.hi.is_infinite() && self.exponent >= 1.0 {
            return Err(Error::InvalidMeasure(format!(
                "exponent {} >= 1 makes rho infinite near infinity",
                self.exponent
            )));
        }
        Ok(())
    }

    fn weight(&self, lambda: f64) -> f64 {
        if self.exponent == 0.0 {
            self.coeff
        } else {
            self.coeff * lambda.powf(self.exponent)
        }
    }

    /// `int f dmu` over this piece restricted to `[a, b]`.
    ///
    /// An infinite tail `[m, inf)` is mapped by `lambda = m/u`, which turns
    /// the weight into the endpoint power `u^{-exponent}`; `f` must decay at
    /// least like `lambda^{-2}` there, or faster than the weight grows.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Complex64> {
        let lo = self.lo.max(a);
        let hi = self.hi.min(b);
        if !(hi > lo) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let s = self.exponent;
        let c = self.coeff;
        let m = if hi.is_finite() { hi } else { lo.max(1.0) };
        let mut acc = Complex64::new(0.0, 0.0);
        if m > lo {
            acc += if lo == 0.0 && s != 0.0 {
                integrate_endpoint_powers(|x| f(x) * c, 0.0, m, s, 0.0, opts)?
            } else {
                integrate(|x| f(x) * self.weight(x), lo, m, &[], opts)?.value
            };
        }
        if hi.is_infinite() {
            let scale = c * m.powf(s + 1.0);
            let g = |u: f64| {
                if u <= 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    f(m / u) * (scale / (u * u))
                }
            };
            acc += if s == 0.0 {
                integrate(g, 0.0, 1.0, &[], opts)?.value
            } else {
                integrate_endpoint_powers(g, 0.0, 1.0, -s, 0.0, opts)?
            };
        }
        Ok(acc)
    }

    /// `mu([a, b])` for this piece, closed form.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        let lo = self.lo.max(a);
        let hi = self.hi.min(b);
        if !(hi > lo) {
            return 0.0;
        }
        let e = self.exponent + 1.0;
        if e == 0.0 {
            return self.coeff * (hi.ln() - lo.ln());
        }
        if hi.is_infinite() {
            return if e < 0.0 {
                -self.coeff * lo.powf(e) / e
            } else {
                f64::INFINITY
            };
        }
        self.coeff * (hi.powf(e) - lo.powf(e)) / e
    }

    /// `int_{[a,b]} dmu / (1 + lambda^2)`; closed form for constant densities.
    pub fn rho_between(&self, a: f64, b: f64) -> Result<f64> {
        let lo = self.lo.max(a);
        let hi = self.hi.min(b);
        if !(hi > lo) {
            return Ok(0.0);
        }
        if self.exponent == 0.0 {
            return Ok(self.coeff * (hi.atan() - lo.atan()));
        }
        Ok(self
            .integrate(|x| Complex64::new(1.0 / (1.0 + x * x), 0.0), lo, hi, &quad_opts())?
            .re)
    }
}

impl DiscPiece {
    pub fn new(coeff: f64, x_exp: f64, one_minus_exp: f64, one_plus_exp: f64, lo: f64, hi: f64) -> Result<Self> {
        let p = DiscPiece {
            coeff,
            x_exp,
            one_minus_exp,
            one_plus_exp,
            lo,
            hi,
        };
        p.validate()?;
        Ok(p)
    }

    /// `coeff * x^s` on `[lo, hi]`.
    pub fn power_x(coeff: f64, s: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(coeff, s, 0.0, 0.0, lo, hi)
    }

    /// `coeff * (1-x)^s` on `[lo, hi]`.
    pub fn power_one_minus(coeff: f64, s: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(coeff, 0.0, s, 0.0, lo, hi)
    }

    /// `coeff * (1+x)^s` on `[lo, hi]`.
    pub fn power_one_plus(coeff: f64, s: f64, lo: f64, hi: f64) -> Result<Self> {
        Self::new(coeff, 0.0, 0.0, s, lo, hi)
    }

    fn validate(&self) -> Result<()> {
        if !(self.coeff > 0.0 && self.coeff.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "density coefficient must be positive, got {}",
                self.coeff
            )));
        }
        if ![self.x_exp, self.one_minus_exp, self.one_plus_exp]
            .iter()
            .all(|e| e.is_finite())
        {
            return Err(Error::InvalidMeasure("density exponents must be finite".into()));
        }
        if !(self.lo >= -1.0 && self.hi <= 1.0 && self.lo < self.hi) {
            return Err(Error::InvalidMeasure(format!(
                "density support [{}, {}] must satisfy -1 <= lo < hi <= 1",
                self.lo, self.hi
            )));
        }
        if self.x_exp != 0.0 {
            if self.lo < 0.0 {
                return Err(Error::InvalidMeasure("a power of x needs support inside [0, 1]".into()));
            }
            if self.lo == 0.0 && self.x_exp <= -1.0 {
                return Err(Error::InvalidMeasure(format!(
                    "x^{} is not integrable at 0",
                    self.x_exp
                )));
            }
        }
        if self.hi == 1.0 && self.one_minus_exp <= -1.0 {
            return Err(Error::InvalidMeasure(format!(
                "(1-x)^{} is not integrable at 1",
                self.one_minus_exp
            )));
        }
        if self.lo == -1.0 && self.one_plus_exp <= -1.0 {
            return Err(Error::InvalidMeasure(format!(
                "(1+x)^{} is not integrable at -1",
                self.one_plus_exp
            )));
        }
        Ok(())
    }

    fn factor(base: f64, e: f64) -> f64 {
        if e == 0.0 {
            1.0
        } else {
            base.powf(e)
        }
    }

    /// Density value at `x` (inside the support).
    pub fn density(&self, x: f64) -> f64 {
        self.coeff
            * Self::factor(x, self.x_exp)
            * Self::factor(1.0 - x, self.one_minus_exp)
            * Self::factor(1.0 + x, self.one_plus_exp)
    }

    fn restricted(&self, a: f64, b: f64) -> Option<DiscPiece> {
        let lo = self.lo.max(a);
        let hi = self.hi.min(b);
        (hi > lo).then_some(DiscPiece { lo, hi, ..*self })
    }

    /// `int f dmu` over the piece restricted to `[a, b]`.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Complex64> {
        let Some(p) = self.restricted(a, b) else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        // Factors that vanish or blow up at an endpoint are absorbed into the
        // substitution; the rest is evaluated directly.
        let left_x = p.lo == 0.0 && p.x_exp != 0.0;
        let left_plus = p.lo == -1.0 && p.one_plus_exp != 0.0;
        let right_minus = p.hi == 1.0 && p.one_minus_exp != 0.0;
        let left_pow = if left_x { p.x_exp } else { 0.0 } + if left_plus { p.one_plus_exp } else { 0.0 };
        let right_pow = if right_minus { p.one_minus_exp } else { 0.0 };
        let rest = |x: f64| {
            let mut w = p.coeff;
            if !left_x {
                w *= Self::factor(x, p.x_exp);
            }
            if !right_minus {
                w *= Self::factor(1.0 - x, p.one_minus_exp);
            }
            if !left_plus {
                w *= Self::factor(1.0 + x, p.one_plus_exp);
            }
            w
        };
        if left_pow == 0.0 && right_pow == 0.0 {
            return Ok(integrate(|x| f(x) * rest(x), p.lo, p.hi, &[], opts)?.value);
        }
        integrate_endpoint_powers(|x| f(x) * rest(x), p.lo, p.hi, left_pow, right_pow, opts)
    }

    fn single_factor(&self) -> Option<(char, f64)> {
        match (self.x_exp != 0.0, self.one_minus_exp != 0.0, self.one_plus_exp != 0.0) {
            (false, false, false) => Some(('x', 0.0)),
            (true, false, false) => Some(('x', self.x_exp)),
            (false, true, false) => Some(('-', self.one_minus_exp)),
            (false, false, true) => Some(('+', self.one_plus_exp)),
            _ => None,
        }
    }

    /// `mu([a, b])` for this piece.
    pub fn mass_between(&self, a: f64, b: f64) -> Result<f64> {
        let Some(p) = self.restricted(a, b) else {
            return Ok(0.0);
        };
        let e = |s: f64| s + 1.0;
        Ok(match p.single_factor() {
            Some(('x', s)) => p.coeff * (p.hi.powf(e(s)) - p.lo.powf(e(s))) / e(s),
            Some(('-', s)) => p.coeff * ((1.0 - p.lo).powf(e(s)) - (1.0 - p.hi).powf(e(s))) / e(s),
            Some(('+', s)) => p.coeff * ((1.0 + p.hi).powf(e(s)) - (1.0 + p.lo).powf(e(s))) / e(s),
            _ => p.integrate(|_| Complex64::new(1.0, 0.0), p.lo, p.hi, &quad_opts())?.re,
        })
    }

    /// `int x^j dmu` over the piece.
    pub fn moment(&self, j: usize) -> Result<f64> {
        let jf = j as f64;
        match self.single_factor() {
            Some(('x', s)) => {
                let e = jf + s + 1.0;
                let pw = |x: f64| if s == 0.0 { x.powi(j as i32 + 1) } else { x.powf(e) };
                Ok(self.coeff * (pw(self.hi) - pw(self.lo)) / e)
            }
            // Closed forms for (1 -+ x)^s only when the piece reaches the
            // zero of the base; the forward recurrence is unstable otherwise.
            Some(('-', s)) if self.hi == 1.0 => Ok(self.coeff * beta_recurrence(1.0 - self.lo, s, j)),
            Some(('+', s)) if self.lo == -1.0 => {
                let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
                Ok(sign * self.coeff * beta_recurrence(1.0 + self.hi, s, j))
            }
            _ => Ok(self
                .integrate(
                    |x| Complex64::new(x.powi(j as i32), 0.0),
                    self.lo,
                    self.hi,
                    &moment_quad_opts(),
                )?
                .re),
        }
    }
}

/// `int_0^b (1 - y)^j y^s dy` by the recurrence
/// `J_j (j + s + 1) = (1 - b)^j b^{s+1} + j J_{j-1}`.
fn beta_recurrence(b: f64, s: f64, j: usize) -> f64 {
    let e = s + 1.0;
    let bp = b.powf(e);
    let mut acc = bp / e;
    let mut boundary = bp;
    for k in 1..=j {
        let kf = k as f64;
        boundary *= 1.0 - b;
        acc = (boundary + kf * acc) / (kf + e);
    }
    acc
}

impl HalfPlaneMeasure {
    pub fn new(atoms: Vec<Atom>, pieces: Vec<HalfPlanePiece>) -> Result<Self> {
        for a in &atoms {
            check_atom(a, 0.0, f64::INFINITY)?;
        }
        for p in &pieces {
            p.validate()?;
        }
        Ok(HalfPlaneMeasure { atoms, pieces })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Sum of point masses `sum m_k delta_{lambda_k}`.
    pub fn atomic(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms.iter().map(|&(pos, mass)| Atom { pos, mass }).collect(),
            Vec::new(),
        )
    }

    /// `coeff * dlambda` on `[lo, hi]`.
    pub fn lebesgue(lo: f64, hi: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![HalfPlanePiece::new(1.0, 0.0, lo, hi)?])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[HalfPlanePiece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.pieces.is_empty()
    }

    /// Points where cumulative quantities jump or change form.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.atoms.iter().map(|a| a.pos).collect();
        for p in &self.pieces {
            if p.lo > 0.0 {
                b.push(p.lo);
            }
            if p.hi.is_finite() {
                b.push(p.hi);
            }
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `int f dmu`, atoms exact, densities by quadrature.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, opts: &QuadOptions) -> Result<Complex64> {
        self.integrate_with_breaks(f, &[], opts)
    }

    /// As [`Self::integrate`], with density pieces split at `breaks` (points
    /// where `f` has a peak or kink).
    pub fn integrate_with_breaks<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        breaks: &[f64],
        opts: &QuadOptions,
    ) -> Result<Complex64> {
        let mut acc: Complex64 = self.atoms.iter().map(|a| f(a.pos) * a.mass).sum();
        if self.pieces.is_empty() {
            return Ok(acc);
        }
        let mut cuts = vec![0.0];
        cuts.extend(breaks.iter().copied().filter(|b| *b > 0.0 && b.is_finite()));
        cuts.push(f64::INFINITY);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for p in &self.pieces {
            for w in cuts.windows(2) {
                acc += p.integrate(&f, w[0], w[1], opts)?;
            }
        }
        Ok(acc)
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>()
            + self
                .pieces
                .iter()
                .map(|p| p.mass_between(0.0, f64::INFINITY))
                .sum::<f64>()
    }

    /// `phi(t) = int e^{-lambda t} dmu(lambda)` for `t > 0`.
    pub fn laplace_transform(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Laplace variable must be positive, got {t}"
            )));
        }
        Ok(self
            .integrate(|l| Complex64::new((-l * t).exp(), 0.0), &quad_opts())?
            .re)
    }

    /// `rho(I) = int_I dmu / (1 + lambda^2)`.
    pub fn rho(&self, interval: RhoInterval) -> Result<f64> {
        let (a, b) = interval.bounds();
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|at| interval.contains(at.pos))
            .map(|at| at.mass / (1.0 + at.pos * at.pos))
            .sum();
        let mut dens = 0.0;
        for p in &self.pieces {
            dens += p.rho_between(a, b)?;
        }
        Ok(atoms + dens)
    }

    /// `rho((0, inf))`.
    pub fn rho_total(&self) -> Result<f64> {
        self.rho(RhoInterval::Between(0.0, f64::INFINITY))
    }

    /// Image on `(-1, 1)` under `gamma(lambda) = (lambda - 1)/(lambda + 1)`,
    /// reweighted by `(1 - t)^2 / 2`.
    ///
    /// A density `c lambda^s` becomes `c (1 + t)^s (1 - t)^{-s}` on the image
    /// interval, because the Jacobian `2 / (1 - t)^2` cancels the weight.
    pub fn cayley_pushforward(&self) -> DiscMeasure {
        let gamma = |l: f64| if l.is_infinite() { 1.0 } else { (l - 1.0) / (l + 1.0) };
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let x = gamma(a.pos);
                Atom {
                    pos: x,
                    mass: a.mass * (1.0 - x).powi(2) / 2.0,
                }
            })
            .collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| DiscPiece {
                coeff: p.coeff,
                x_exp: 0.0,
                one_minus_exp: -p.exponent,
                one_plus_exp: p.exponent,
                lo: gamma(p.lo),
                hi: gamma(p.hi),
            })
            .collect();
        DiscMeasure { atoms, pieces }
    }
}

/// Intervals accepted by [`HalfPlaneMeasure::rho`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoInterval {
    /// `(0, eps]`
    Head(f64),
    /// `[t, inf)`
    Tail(f64),
    /// `(a, b]`, with `b` possibly infinite.
    Between(f64, f64),
}

impl RhoInterval {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            RhoInterval::Head(e) => (0.0, e),
            RhoInterval::Tail(t) => (t, f64::INFINITY),
            RhoInterval::Between(a, b) => (a, b),
        }
    }

    fn contains(&self, x: f64) -> bool {
        match *self {
            RhoInterval::Head(e) => x > 0.0 && x <= e,
            RhoInterval::Tail(t) => x >= t,
            RhoInterval::Between(a, b) => x > a && x <= b,
        }
    }
}

impl DiscMeasure {
    pub fn new(atoms: Vec<Atom>, pieces: Vec<DiscPiece>) -> Result<Self> {
        for a in &atoms {
            check_atom(a, -1.0, 1.0)?;
        }
        for p in &pieces {
            p.validate()?;
        }
        Ok(DiscMeasure { atoms, pieces })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn atomic(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms.iter().map(|&(pos, mass)| Atom { pos, mass }).collect(),
            Vec::new(),
        )
    }

    /// Lebesgue measure on `[lo, hi]`.
    pub fn lebesgue(lo: f64, hi: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![DiscPiece::power_x(1.0, 0.0, lo, hi)?])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[DiscPiece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.pieces.is_empty()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.atoms.iter().map(|a| a.pos).collect();
        for p in &self.pieces {
            b.push(p.lo);
            b.push(p.hi);
        }
        b.retain(|x| *x > -1.0 && *x < 1.0);
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, opts: &QuadOptions) -> Result<Complex64> {
        let mut acc: Complex64 = self.atoms.iter().map(|a| f(a.pos) * a.mass).sum();
        for p in &self.pieces {
            acc += p.integrate(&f, -1.0, 1.0, opts)?;
        }
        Ok(acc)
    }

    /// `c_j = int x^j dmu(x)`, closed form for atoms and single-power pieces.
    pub fn moment(&self, j: usize) -> Result<f64> {
        self.moment_capped(j, MOMENT_CAP)
    }

    pub fn moment_capped(&self, j: usize, cap: usize) -> Result<f64> {
        if j > cap {
            return Err(Error::MomentCap { index: j, cap });
        }
        let mut acc: f64 = self.atoms.iter().map(|a| a.mass * a.pos.powi(j as i32)).sum();
        for p in &self.pieces {
            acc += p.moment(j)?;
        }
        Ok(acc)
    }

    /// `c_0, ..., c_{n-1}`.
    pub fn moments(&self, n: usize) -> Result<MomentVector> {
        let values = (0..n).map(|j| self.moment(j)).collect::<Result<Vec<_>>>()?;
        Ok(MomentVector { values })
    }

    /// `int |x|^j dmu(x)`.
    pub fn abs_moment(&self, j: usize) -> Result<f64> {
        if j > MOMENT_CAP {
            return Err(Error::MomentCap {
                index: j,
                cap: MOMENT_CAP,
            });
        }
        let mut acc: f64 = self.atoms.iter().map(|a| a.mass * a.pos.abs().powi(j as i32)).sum();
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        for p in &self.pieces {
            if let Some(pos) = p.restricted(0.0, 1.0) {
                acc += pos.moment(j)?;
            }
            if let Some(neg) = p.restricted(-1.0, 0.0) {
                acc += sign * neg.moment(j)?;
            }
        }
        Ok(acc)
    }

    pub fn total_mass(&self) -> Result<f64> {
        self.mass_between(-1.0, 1.0)
    }

    /// `mu([a, b])`, closed interval.
    pub fn mass_between(&self, a: f64, b: f64) -> Result<f64> {
        let mut acc: f64 = self
            .atoms
            .iter()
            .filter(|at| at.pos >= a && at.pos <= b)
            .map(|at| at.mass)
            .sum();
        for p in &self.pieces {
            acc += p.mass_between(a, b)?;
        }
        Ok(acc)
    }
}

/// A finite moment sequence `c_0, c_1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub values: Vec<f64>,
}

impl MomentVector {
    pub fn new(values: Vec<f64>) -> Self {
        MomentVector { values }
    }

    /// Moments `1/(j+1)` of Lebesgue measure on `[0, 1]`.
    pub fn hilbert(n: usize) -> Self {
        MomentVector {
            values: (0..n).map(|j| 1.0 / (j as f64 + 1.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn moment_examples() {
        let leb = DiscMeasure::lebesgue(0.0, 1.0).unwrap();
        assert_relative_eq!(leb.moment(2).unwrap(), 1.0 / 3.0, max_relative = 1e-15);
        let origin = DiscMeasure::atomic(&[(0.0, 1.0)]).unwrap();
        assert_eq!(origin.moment(5).unwrap(), 0.0);
        let sqrt = DiscMeasure::new(vec![], vec![DiscPiece::power_x(1.0, 0.5, 0.0, 1.0).unwrap()]).unwrap();
        assert_relative_eq!(sqrt.moment(3).unwrap(), 1.0 / 4.5, max_relative = 1e-14);
    }

    #[test]
    fn moment_cap_is_enforced() {
        let leb = DiscMeasure::lebesgue(0.0, 1.0).unwrap();
        assert!(matches!(leb.moment(MOMENT_CAP + 1), Err(Error::MomentCap { .. })));
        assert!(leb.moment(MOMENT_CAP).is_ok());
    }

    #[test]
    fn one_minus_power_moments_match_beta_function() {
        // int_0^1 x^j (1-x)^{-1/2} dx = B(j+1, 1/2) = prod_{k=1}^j k/(k+1/2) * 2
        let m = DiscMeasure::new(vec![], vec![DiscPiece::power_one_minus(1.0, -0.5, 0.0, 1.0).unwrap()]).unwrap();
        let mut beta = 2.0;
        for j in 0..40 {
            if j > 0 {
                beta *= j as f64 / (j as f64 + 0.5);
            }
            assert_relative_eq!(m.moment(j).unwrap(), beta, max_relative = 1e-12);
        }
        // the same integral by quadrature on a two-factor piece with a zero exponent
        let q = DiscPiece::new(1.0, 0.0, -0.5, 1e-300, 0.0, 1.0).unwrap();
        assert_relative_eq!(q.moment(7).unwrap(), m.moment(7).unwrap(), max_relative = 1e-9);
    }

    #[test]
    fn one_plus_power_moments_alternate() {
        // (1+x)^s on [-1, 0] is the mirror of (1-x)^s on [0, 1]
        let a = DiscMeasure::new(vec![], vec![DiscPiece::power_one_plus(2.0, 0.3, -1.0, 0.0).unwrap()]).unwrap();
        let b = DiscMeasure::new(vec![], vec![DiscPiece::power_one_minus(2.0, 0.3, 0.0, 1.0).unwrap()]).unwrap();
        for j in 0..12 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(a.moment(j).unwrap(), sign * b.moment(j).unwrap(), max_relative = 1e-12);
        }
    }

    #[test]
    fn invalid_measures_are_rejected() {
        assert!(HalfPlaneMeasure::atomic(&[(0.0, 1.0)]).is_err());
        assert!(HalfPlaneMeasure::atomic(&[(1.0, -1.0)]).is_err());
        assert!(HalfPlanePiece::new(1.0, -1.0, 0.0, 1.0).is_err());
        assert!(HalfPlanePiece::new(1.0, 1.0, 0.0, f64::INFINITY).is_err());
        assert!(DiscMeasure::atomic(&[(1.0, 1.0)]).is_err());
        assert!(DiscPiece::power_x(1.0, 0.5, -0.5, 0.5).is_err());
        assert!(DiscPiece::power_one_minus(1.0, -1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn laplace_examples() {
        let d1 = HalfPlaneMeasure::atomic(&[(1.0, 1.0)]).unwrap();
        assert_relative_eq!(
            d1.laplace_transform(1.0).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(d1.laplace_transform(1e-12).unwrap(), 1.0, max_relative = 1e-11);
        assert!(d1.laplace_transform(0.0).is_err());
        let leb = HalfPlaneMeasure::lebesgue(0.0, 1.0).unwrap();
        assert_relative_eq!(
            leb.laplace_transform(1.0).unwrap(),
            1.0 - (-1.0f64).exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn rho_examples() {
        let d1 = HalfPlaneMeasure::atomic(&[(1.0, 1.0)]).unwrap();
        assert_relative_eq!(d1.rho(RhoInterval::Between(0.0, 2.0)).unwrap(), 0.5);
        assert_eq!(d1.rho(RhoInterval::Tail(2.0)).unwrap(), 0.0);
        assert_relative_eq!(d1.rho(RhoInterval::Tail(1.0)).unwrap(), 0.5);
        assert_eq!(d1.rho(RhoInterval::Head(0.999)).unwrap(), 0.0);
        let leb = HalfPlaneMeasure::lebesgue(0.0, f64::INFINITY).unwrap();
        assert_relative_eq!(
            leb.rho(RhoInterval::Between(0.0, f64::INFINITY)).unwrap(),
            std::f64::consts::FRAC_PI_2,
            max_relative = 1e-15
        );
        assert!(leb.total_mass().is_infinite());
    }

    #[test]
    fn rho_quadrature_for_power_density() {
        // lambda^{1/2} on (0, inf): int lambda^{1/2}/(1+lambda^2) = pi / (2 cos(pi/4))
        let m =
            HalfPlaneMeasure::new(vec![], vec![HalfPlanePiece::new(1.0, 0.5, 0.0, f64::INFINITY).unwrap()]).unwrap();
        let expected = std::f64::consts::PI / (2.0 * (std::f64::consts::PI / 4.0).cos());
        assert_relative_eq!(m.rho_total().unwrap(), expected, max_relative = 1e-9);
    }

    #[test]
    fn pushforward_examples() {
        let d = HalfPlaneMeasure::atomic(&[(1.0, 1.0)]).unwrap().cayley_pushforward();
        assert_eq!(d.atoms(), &[Atom { pos: 0.0, mass: 0.5 }]);
        let d = HalfPlaneMeasure::atomic(&[(3.0, 2.0)]).unwrap().cayley_pushforward();
        assert_relative_eq!(d.atoms()[0].pos, 0.5);
        assert_relative_eq!(d.atoms()[0].mass, 0.25);
        assert!(HalfPlaneMeasure::empty().cayley_pushforward().is_empty());
        // Lebesgue on (0, 1) lands on Lebesgue on (-1, 0)
        let d = HalfPlaneMeasure::lebesgue(0.0, 1.0).unwrap().cayley_pushforward();
        for j in 0..10 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(d.moment(j).unwrap(), sign / (j as f64 + 1.0), max_relative = 1e-13);
        }
    }

    #[test]
    fn abs_moments_split_at_origin() {
        let m = DiscMeasure::lebesgue(-1.0, 1.0).unwrap();
        for j in 0..6 {
            assert_relative_eq!(m.abs_moment(j).unwrap(), 2.0 / (j as f64 + 1.0), max_relative = 1e-13);
        }
    }
}
