//! Szegő and Poisson kernels of the disc and the upper half-plane, the Cayley
//! transform `omega(z) = i (1 + z)/(1 - z)`, and the unitary `Gamma_2`
//! between the two Hardy spaces.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Domain;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// An interior point of the disc or of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainPoint {
    pub value: Complex64,
    pub domain: Domain,
}

impl DomainPoint {
    pub fn disc(z: Complex64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(Error::InvalidArgument(format!("{z} is not inside the unit disc")));
        }
        Ok(DomainPoint {
            value: z,
            domain: Domain::Disc,
        })
    }

    pub fn halfplane(z: Complex64) -> Result<Self> {
        if !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("{z} is not in the upper half-plane")));
        }
        Ok(DomainPoint {
            value: z,
            domain: Domain::HalfPlane,
        })
    }
}

/// `(1/2pi) / (1 - z conj(w))`; valid for `|z|, |w| <= 1` off the diagonal
/// of the boundary.
pub fn szego_disc(z: Complex64, w: Complex64) -> Complex64 {
    (ONE - z * w.conj()).inv() / (2.0 * PI)
}

/// `(1/2pi) i / (z - conj(w))`; valid for `Im z, Im w >= 0` not both zero.
pub fn szego_hp(z: Complex64, w: Complex64) -> Complex64 {
    I / (z - w.conj()) / (2.0 * PI)
}

pub fn szego(p: DomainPoint, q: DomainPoint) -> Result<Complex64> {
    if p.domain != q.domain {
        return Err(Error::DomainMismatch(format!(
            "{} point paired with {} point",
            p.domain, q.domain
        )));
    }
    Ok(match p.domain {
        Domain::Disc => szego_disc(p.value, q.value),
        Domain::HalfPlane => szego_hp(p.value, q.value),
    })
}

/// `Im z / (pi |z - x|^2)` for real `x`.
pub fn poisson_hp(z: Complex64, x: f64) -> f64 {
    z.im / (PI * (z - x).norm_sqr())
}

/// `(1 - |z|^2) / (2 pi |1 - z e^{-it}|^2)` at the boundary point `e^{it}`.
pub fn poisson_disc(z: Complex64, t: f64) -> f64 {
    let x = Complex64::from_polar(1.0, t);
    (1.0 - z.norm_sqr()) / (2.0 * PI * (ONE - z * x.conj()).norm_sqr())
}

/// Poisson kernel at the boundary point `x`: real for the half-plane,
/// unimodular for the disc.
pub fn poisson(p: DomainPoint, x: Complex64) -> Result<f64> {
    match p.domain {
        Domain::HalfPlane => {
            if x.im != 0.0 {
                return Err(Error::DomainMismatch(format!("{x} is not on the real line")));
            }
            Ok(poisson_hp(p.value, x.re))
        }
        Domain::Disc => {
            if (x.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::DomainMismatch(format!("{x} is not on the unit circle")));
            }
            Ok(poisson_disc(p.value, x.arg()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CayleyDirection {
    DiscToHp,
    HpToDisc,
}

/// `omega(z) = i (1 + z)/(1 - z)`, unchecked.
pub fn omega(z: Complex64) -> Complex64 {
    I * (ONE + z) / (ONE - z)
}

/// `omega^{-1}(w) = (w - i)/(w + i)`, unchecked.
pub fn omega_inv(w: Complex64) -> Complex64 {
    (w - I) / (w + I)
}

/// `omega'(z) = 2i / (1 - z)^2`, unchecked.
pub fn omega_prime(z: Complex64) -> Complex64 {
    2.0 * I / ((ONE - z) * (ONE - z))
}

pub fn cayley_map(z: Complex64, direction: CayleyDirection) -> Result<Complex64> {
    match direction {
        CayleyDirection::DiscToHp => {
            if z == ONE {
                return Err(Error::Pole("omega is singular at z = 1".into()));
            }
            Ok(omega(z))
        }
        CayleyDirection::HpToDisc => {
            if z == -I {
                return Err(Error::Pole("omega^{-1} is singular at w = -i".into()));
            }
            Ok(omega_inv(z))
        }
    }
}

/// `omega'(z)`; rejects `z = 1`.
pub fn cayley_derivative(z: Complex64) -> Result<Complex64> {
    if z == ONE {
        return Err(Error::Pole("omega' is singular at z = 1".into()));
    }
    Ok(omega_prime(z))
}

/// `(1 + i)/(1 - z)`, the square root of `omega'` that is analytic on the
/// disc. The principal root of `omega'(z)` agrees with it only where
/// `arg(1 - z) > -pi/4`.
pub fn sqrt_omega_prime(z: Complex64) -> Complex64 {
    Complex64::new(1.0, 1.0) / (ONE - z)
}

/// `sqrt(omega'(z)) Q_hp(omega z, omega w) conj(sqrt(omega'(w)))` with the
/// analytic root [`sqrt_omega_prime`]; equals the disc kernel.
pub fn transformed_szego(z: Complex64, w: Complex64) -> Complex64 {
    sqrt_omega_prime(z) * szego_hp(omega(z), omega(w)) * sqrt_omega_prime(w).conj()
}

/// Taylor coefficients `a_0, ..., a_{N-1}` of a polynomial in `H^2` of the disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyCoeffs {
    pub coeffs: Vec<Complex64>,
}

impl HardyCoeffs {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        HardyCoeffs { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        HardyCoeffs {
            coeffs: coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `f(z)` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `sum |a_n|^2`.
    pub fn l2_norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `int |f(e^{it})|^2 dt = 2 pi sum |a_n|^2`.
    pub fn length_norm_sqr(&self) -> f64 {
        2.0 * PI * self.l2_norm_sqr()
    }
}

/// `(Gamma_2 f)(x) = sqrt(2)/(x + i) f((x - i)/(x + i))` for `Im x >= 0`.
pub fn gamma2_eval(f: &HardyCoeffs, x: Complex64) -> Result<Complex64> {
    if x.im < 0.0 || !x.re.is_finite() || !x.im.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "{x} is outside the closed upper half-plane"
        )));
    }
    Ok(SQRT_2 / (x + I) * f.eval(omega_inv(x)))
}

/// Trapezoidal rule on the circle in arc length: `int_0^{2pi} f(t) dt` with
/// `n` equispaced nodes.
pub fn circle_trapezoid<F: Fn(f64) -> Complex64>(f: F, n: usize) -> Complex64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<Complex64>() * h
}

/// Default node count for boundary integrals on the circle.
pub const CIRCLE_NODES: usize = 4096;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn szego_examples() {
        let o = DomainPoint::disc(c(0.0, 0.0)).unwrap();
        assert_relative_eq!(szego(o, o).unwrap().re, 1.0 / (2.0 * PI), epsilon = 1e-16);
        let i = DomainPoint::halfplane(I).unwrap();
        let i2 = DomainPoint::halfplane(2.0 * I).unwrap();
        let v = szego(i, i).unwrap();
        assert_relative_eq!(v.re, 1.0 / (4.0 * PI), epsilon = 1e-16);
        assert_eq!(v.im, 0.0);
        assert_relative_eq!(szego(i, i2).unwrap().re, 1.0 / (6.0 * PI), epsilon = 1e-16);
        assert!(matches!(szego(o, i), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn poisson_examples() {
        let i = DomainPoint::halfplane(I).unwrap();
        assert_relative_eq!(poisson(i, c(0.0, 0.0)).unwrap(), 1.0 / PI, epsilon = 1e-16);
        let z = DomainPoint::halfplane(c(1.0, 1.0)).unwrap();
        assert_relative_eq!(poisson(z, c(1.0, 0.0)).unwrap(), 1.0 / PI, epsilon = 1e-16);
        let o = DomainPoint::disc(c(0.0, 0.0)).unwrap();
        assert_relative_eq!(
            poisson(o, Complex64::from_polar(1.0, 2.3)).unwrap(),
            1.0 / (2.0 * PI),
            epsilon = 1e-16
        );
        assert!(poisson(o, c(0.5, 0.0)).is_err());
        assert!(poisson(i, I).is_err());
    }

    #[test]
    fn hua_identity_at_a_few_points() {
        for &(z, x) in &[(c(0.3, 0.7), -1.2), (c(-2.0, 0.1), 0.4), (c(5.0, 3.0), 5.0)] {
            let hua = szego_hp(z, c(x, 0.0)).norm_sqr() / szego_hp(z, z).re;
            assert_relative_eq!(poisson_hp(z, x), hua, max_relative = 1e-12);
        }
        for &(z, t) in &[(c(0.3, 0.5), 1.0), (c(-0.9, 0.0), 3.0)] {
            let x = Complex64::from_polar(1.0, t);
            let hua = szego_disc(z, x).norm_sqr() / szego_disc(z, z).re;
            assert_relative_eq!(poisson_disc(z, t), hua, max_relative = 1e-12);
        }
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(cayley_map(c(0.0, 0.0), CayleyDirection::DiscToHp).unwrap(), I);
        assert_eq!(cayley_map(I, CayleyDirection::HpToDisc).unwrap(), c(0.0, 0.0));
        assert_eq!(cayley_map(c(-1.0, 0.0), CayleyDirection::DiscToHp).unwrap().norm(), 0.0);
        assert!(cayley_map(ONE, CayleyDirection::DiscToHp).is_err());
        assert!(cayley_map(-I, CayleyDirection::HpToDisc).is_err());
        assert!(cayley_derivative(ONE).is_err());
        assert_eq!(cayley_derivative(c(0.0, 0.0)).unwrap(), 2.0 * I);
    }

    #[test]
    fn kernel_transformation_at_origin() {
        let z = c(0.0, 0.0);
        assert_relative_eq!(transformed_szego(z, z).re, 1.0 / (2.0 * PI), epsilon = 1e-15);
        let z = c(0.4, -0.3);
        let w = c(-0.2, 0.6);
        let d = transformed_szego(z, w) - szego_disc(z, w);
        assert!(d.norm() < 1e-14);
    }

    #[test]
    fn gamma2_examples() {
        let one = HardyCoeffs::from_real(&[1.0]);
        let v = gamma2_eval(&one, c(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.im, -SQRT_2, epsilon = 1e-15);
        let z = HardyCoeffs::from_real(&[0.0, 1.0]);
        let v = gamma2_eval(&z, c(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.im, SQRT_2, epsilon = 1e-15);
        assert!(gamma2_eval(&one, c(0.0, -1.0)).is_err());
    }

    #[test]
    fn horner_and_norms() {
        let f = HardyCoeffs::new(vec![c(1.0, 0.0), c(0.0, 2.0)]);
        assert_eq!(f.eval(c(0.5, 0.0)), c(1.0, 1.0));
        assert_eq!(f.l2_norm_sqr(), 5.0);
        assert_relative_eq!(f.length_norm_sqr(), 10.0 * PI);
    }

    #[test]
    fn trapezoid_reproduces_on_circle() {
        let f = HardyCoeffs::from_real(&[1.0, -0.5, 0.25]);
        let w = c(0.3, 0.4);
        let v = circle_trapezoid(
            |t| {
                let x = Complex64::from_polar(1.0, t);
                szego_disc(x, w).conj() * f.eval(x)
            },
            CIRCLE_NODES,
        );
        assert!((v - f.eval(w)).norm() < 1e-13);
    }
}
