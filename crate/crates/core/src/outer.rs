//! Outer functions from boundary moduli, the factor `g = Out(|delta|^{1/2})`
//! with `delta = h_H + c`, and the weighted Szegő kernel of `|delta| dx`.
//!
//! Half-plane: `Out(k, C)(z) = C exp((1/(pi i)) int [1/(p - z) - p/(1 + p^2)] log k(p) dp)`.
//! Disc: `Out(k, C)(z) = C exp((1/2pi) int (e^{it} + z)/(e^{it} - z) log k(e^{it}) dt)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::szego_hp;
use crate::measure::{Domain, HalfPlaneMeasure};
use crate::pick::symbol_h;
use crate::quadrature::{integrate, QuadOptions};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Smallest admissible distance from the boundary.
pub const MIN_DEPTH: f64 = 1e-6;

/// One multiplicative factor of a boundary weight, raised to an exponent.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFactor {
    /// `|x - a|`, with `a` off the boundary.
    Linear(Complex64),
    /// `|c + h_H(x)|^2 = c^2 + |h_H(x)|^2` (half-plane only).
    DeltaSq { mu: HalfPlaneMeasure, c: f64 },
}

impl WeightFactor {
    fn log_abs(&self, x: Complex64) -> Result<f64> {
        match self {
            WeightFactor::Linear(a) => Ok((x - a).norm().ln()),
            WeightFactor::DeltaSq { mu, c } => {
                let h = if x.re == 0.0 { 0.0 } else { symbol_h(mu, x.re)?.im };
                Ok((c * c + h * h).ln())
            }
        }
    }
}

/// A positive boundary function `k = exp(log_scale) prod |factor|^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryWeight {
    pub domain: Domain,
    pub log_scale: f64,
    pub factors: Vec<(WeightFactor, f64)>,
}

impl BoundaryWeight {
    pub fn constant(domain: Domain, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "constant weight must be positive, got {k}"
            )));
        }
        Ok(BoundaryWeight {
            domain,
            log_scale: k.ln(),
            factors: Vec::new(),
        })
    }

    /// `scale * prod |x - z_i| / prod |x - p_j|`.
    pub fn rational(domain: Domain, scale: f64, zeros: &[Complex64], poles: &[Complex64]) -> Result<Self> {
        let mut w = Self::constant(domain, scale)?;
        for (roots, e) in [(zeros, 1.0), (poles, -1.0)] {
            for &a in roots {
                let on_boundary = match domain {
                    Domain::HalfPlane => a.im == 0.0,
                    Domain::Disc => (a.norm() - 1.0).abs() < 1e-12,
                };
                if on_boundary {
                    return Err(Error::InvalidArgument(format!("root {a} lies on the boundary")));
                }
                w.factors.push((WeightFactor::Linear(a), e));
            }
        }
        Ok(w)
    }

    /// `|c + h_H|^exponent`.
    pub fn delta_power(mu: &HalfPlaneMeasure, c: f64, exponent: f64) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::InvalidArgument("the offset c must be nonzero".into()));
        }
        Ok(BoundaryWeight {
            domain: Domain::HalfPlane,
            log_scale: 0.0,
            factors: vec![(WeightFactor::DeltaSq { mu: mu.clone(), c }, 0.5 * exponent)],
        })
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "{} weight times {} weight",
                self.domain, other.domain
            )));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(BoundaryWeight {
            domain: self.domain,
            log_scale: self.log_scale + other.log_scale,
            factors,
        })
    }

    /// `k^t`.
    pub fn pow(&self, t: f64) -> Self {
        BoundaryWeight {
            domain: self.domain,
            log_scale: t * self.log_scale,
            factors: self.factors.iter().map(|(f, e)| (f.clone(), t * e)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1.0)
    }

    /// `k^vee`: `x -> k(-x)` on the line, `z -> k(conj z)` on the circle.
    pub fn reflect(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .map(|(f, e)| {
                let g = match f {
                    WeightFactor::Linear(a) => WeightFactor::Linear(match self.domain {
                        Domain::HalfPlane => -a,
                        Domain::Disc => a.conj(),
                    }),
                    other => other.clone(),
                };
                (g, *e)
            })
            .collect();
        BoundaryWeight {
            domain: self.domain,
            log_scale: self.log_scale,
            factors,
        }
    }

    /// Net power of `|x|` at infinity (half-plane).
    fn degree(&self) -> f64 {
        self.factors
            .iter()
            .filter(|(f, _)| matches!(f, WeightFactor::Linear(_)))
            .map(|(_, e)| e)
            .sum()
    }

    /// `k` is bounded on the boundary.
    pub fn bounded(&self) -> bool {
        self.domain == Domain::Disc || self.degree() <= 0.0
    }

    /// `1/k` is bounded on the boundary.
    pub fn inverse_bounded(&self) -> bool {
        self.domain == Domain::Disc || self.degree() >= 0.0
    }

    /// `log k` at a boundary point: real `x` on the line, `e^{it}` on the circle.
    pub fn log_at(&self, x: Complex64) -> Result<f64> {
        let mut acc = self.log_scale;
        for (f, e) in &self.factors {
            acc += e * f.log_abs(x)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: Complex64) -> Result<f64> {
        Ok(self.log_at(x)?.exp())
    }

    /// Moves factors that are constant on the boundary into the scale.
    fn folded(&self) -> Result<Self> {
        let mut out = BoundaryWeight {
            domain: self.domain,
            log_scale: self.log_scale,
            factors: Vec::with_capacity(self.factors.len()),
        };
        for (f, e) in &self.factors {
            match f {
                WeightFactor::DeltaSq { mu, .. } if mu.is_empty() => {
                    out.log_scale += e * f.log_abs(Complex64::new(0.0, 0.0))?;
                }
                _ => out.factors.push((f.clone(), *e)),
            }
        }
        Ok(out)
    }

    fn root_breaks(&self) -> Vec<Complex64> {
        self.factors
            .iter()
            .filter_map(|(f, _)| match f {
                WeightFactor::Linear(a) => Some(*a),
                _ => None,
            })
            .collect()
    }
}

fn outer_opts() -> QuadOptions {
    QuadOptions {
        max_panels: 200_000,
        ..QuadOptions::with_tol(1e-13, 1e-10)
    }
}

/// The exponent of the outer function, `log Out(k, 1)(z)`.
pub fn outer_log(k: &BoundaryWeight, z: Complex64) -> Result<Complex64> {
    let k = &k.folded()?;
    match k.domain {
        Domain::HalfPlane => {
            if !(z.im >= MIN_DEPTH) {
                return Err(Error::InvalidArgument(format!(
                    "outer functions are evaluated only at Im z >= {MIN_DEPTH}, got {z}"
                )));
            }
            if k.factors.is_empty() {
                return Ok(Complex64::new(k.log_scale, 0.0));
            }
            let (x0, y) = (z.re, z.im);
            let mut breaks = vec![0.0, -1.0, 1.0, x0];
            for s in [1.0, 10.0, 100.0] {
                breaks.push(x0 - s * y);
                breaks.push(x0 + s * y);
            }
            breaks.extend(k.root_breaks().iter().map(|a| a.re));
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let f = |p: f64| -> Complex64 {
                let lk = k.log_at(Complex64::new(p, 0.0)).unwrap_or(f64::NAN);
                ((p - z).inv() - p / (1.0 + p * p)) * lk
            };
            let v = integrate(f, f64::NEG_INFINITY, f64::INFINITY, &breaks, &outer_opts())?;
            if !v.value.re.is_finite() || !v.value.im.is_finite() {
                return Err(Error::InvalidArgument(
                    "weight could not be evaluated on the boundary".into(),
                ));
            }
            Ok(v.value / (PI * I))
        }
        Domain::Disc => {
            if !(z.norm() <= 1.0 - MIN_DEPTH) {
                return Err(Error::InvalidArgument(format!(
                    "outer functions are evaluated only at |z| <= 1 - {MIN_DEPTH}, got {z}"
                )));
            }
            if k.factors.is_empty() {
                return Ok(Complex64::new(k.log_scale, 0.0));
            }
            let wrap = |t: f64| t.rem_euclid(2.0 * PI);
            let mut breaks = vec![wrap(z.arg())];
            let d = 1.0 - z.norm();
            for s in [1.0, 10.0, 100.0] {
                breaks.push(wrap(z.arg() - s * d));
                breaks.push(wrap(z.arg() + s * d));
            }
            breaks.extend(k.root_breaks().iter().map(|a| wrap(a.arg())));
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let f = |t: f64| -> Complex64 {
                let e = Complex64::from_polar(1.0, t);
                let lk = k.log_at(e).unwrap_or(f64::NAN);
                (e + z) / (e - z) * lk
            };
            let v = integrate(f, 0.0, 2.0 * PI, &breaks, &outer_opts())?;
            if !v.value.re.is_finite() || !v.value.im.is_finite() {
                return Err(Error::InvalidArgument(
                    "weight could not be evaluated on the boundary".into(),
                ));
            }
            Ok(v.value / (2.0 * PI))
        }
    }
}

/// `Out(k, C)(z)` for unimodular `C`.
pub fn outer_eval(k: &BoundaryWeight, c: Complex64, z: Complex64) -> Result<Complex64> {
    if (c.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("phase constant {c} is not unimodular")));
    }
    Ok(c * outer_log(k, z)?.exp())
}

/// Boundary-modulus recovery at `x`: `(|Out(k)(x + i eps)| - k(x))` for each
/// `eps`, on the line, or at `(1 - eps) e^{ix}` on the circle.
pub fn boundary_errors(k: &BoundaryWeight, x: f64, eps: &[f64]) -> Result<Vec<f64>> {
    let (target, point): (f64, Box<dyn Fn(f64) -> Complex64>) = match k.domain {
        Domain::HalfPlane => (k.eval(Complex64::new(x, 0.0))?, Box::new(move |e| Complex64::new(x, e))),
        Domain::Disc => (
            k.eval(Complex64::from_polar(1.0, x))?,
            Box::new(move |e| Complex64::from_polar(1.0 - e, x)),
        ),
    };
    eps.iter()
        .map(|&e| Ok(outer_log(k, point(e))?.exp().norm() - target))
        .collect()
}

fn check_offset(c: f64) -> Result<()> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidArgument("the offset c must be nonzero".into()));
    }
    Ok(())
}

/// `g(z) = Out(|delta|^{1/2})(z)`, `delta = h_H + c`.
pub fn g_from_delta(mu: &HalfPlaneMeasure, c: f64, z: Complex64) -> Result<Complex64> {
    check_offset(c)?;
    outer_eval(&BoundaryWeight::delta_power(mu, c, 0.5)?, Complex64::new(1.0, 0.0), z)
}

/// `delta(x) = h_H(x) + c` on the real line.
pub fn delta(mu: &HalfPlaneMeasure, c: f64, x: f64) -> Result<Complex64> {
    let h = if x == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        symbol_h(mu, x)?
    };
    Ok(h + c)
}

/// `Q(z, w) / (g(z) conj(g(w)))`, the reproducing kernel of `H^2` with
/// respect to `|delta(x)| dx`.
pub fn weighted_szego(mu: &HalfPlaneMeasure, c: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    let gz = g_from_delta(mu, c, z)?;
    let gw = if z == w { gz } else { g_from_delta(mu, c, w)? };
    Ok(szego_hp(z, w) / (gz * gw.conj()))
}

/// Reproducing check for the weighted kernel with `f = Q^nu_{w2}`:
/// returns `(int conj(Q^nu_w(x)) f(x) |delta(x)| dx, f(w))`, with the
/// boundary values of `g` taken at `x + i eps`.
pub fn weighted_reproducing(
    mu: &HalfPlaneMeasure,
    c: f64,
    w: Complex64,
    w2: Complex64,
    eps: f64,
) -> Result<(Complex64, Complex64)> {
    check_offset(c)?;
    let weight = BoundaryWeight::delta_power(mu, c, 0.5)?;
    let gw = outer_eval(&weight, Complex64::new(1.0, 0.0), w)?;
    let gw2 = outer_eval(&weight, Complex64::new(1.0, 0.0), w2)?;
    let f = |x: f64| -> Complex64 {
        let inner = || -> Result<Complex64> {
            let gx = outer_log(&weight, Complex64::new(x, eps))?.exp();
            let dx = delta(mu, c, x)?.norm();
            let qw = szego_hp(Complex64::new(x, 0.0), w) / (gx * gw.conj());
            let qw2 = szego_hp(Complex64::new(x, 0.0), w2) / (gx * gw2.conj());
            Ok(qw.conj() * qw2 * dx)
        };
        inner().unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let breaks = [w.re, w2.re, 0.0, -1.0, 1.0];
    let v = integrate(
        f,
        f64::NEG_INFINITY,
        f64::INFINITY,
        &breaks,
        &QuadOptions::with_tol(1e-12, 1e-8),
    )?;
    let expected = szego_hp(w, w2) / (gw * gw2.conj());
    Ok((v.value, expected))
}
