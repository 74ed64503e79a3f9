//! JSON measure specifications.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Atom, DiscMeasure, DiscPiece, Domain, HalfPlaneMeasure, HalfPlanePiece, Measure};
use crate::error::{Error, Result};

/// A support endpoint: a finite number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound(pub f64);

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Bound(x)),
            Raw::Str(s) if s == "inf" || s == "+inf" => Ok(Bound(f64::INFINITY)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("unknown support bound {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub pos: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    X,
    OneMinusX,
    OnePlusX,
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensitySpec {
    /// `coeff * base^exponent` on `support`.
    Power {
        coeff: f64,
        exponent: f64,
        base: Base,
        support: [Bound; 2],
    },
    /// `coeff * (1-x)^alpha * (1+x)^beta` on `support` (disc only).
    Jacobi {
        coeff: f64,
        alpha: f64,
        beta: f64,
        support: [Bound; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub domain: Domain,
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub densities: Vec<DensitySpec>,
}

impl MeasureSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(format!("spec parse error: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure spec serializes")
    }

    pub fn into_measure(&self) -> Result<Measure> {
        let atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|a| Atom {
                pos: a.pos,
                mass: a.mass,
            })
            .collect();
        match self.domain {
            Domain::HalfPlane => {
                let pieces = self
                    .densities
                    .iter()
                    .map(|d| match *d {
                        DensitySpec::Power {
                            coeff,
                            exponent,
                            base: Base::Lambda,
                            support,
                        } => HalfPlanePiece::new(coeff, exponent, support[0].0, support[1].0),
                        _ => Err(Error::InvalidMeasure(
                            "half-plane densities must be power laws in lambda".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Measure::HalfPlane(HalfPlaneMeasure::new(atoms, pieces)?))
            }
            Domain::Disc => {
                let pieces = self
                    .densities
                    .iter()
                    .map(|d| match *d {
                        DensitySpec::Power {
                            coeff,
                            exponent,
                            base,
                            support,
                        } => {
                            let (lo, hi) = (support[0].0, support[1].0);
                            match base {
                                Base::X => DiscPiece::power_x(coeff, exponent, lo, hi),
                                Base::OneMinusX => DiscPiece::power_one_minus(coeff, exponent, lo, hi),
                                Base::OnePlusX => DiscPiece::power_one_plus(coeff, exponent, lo, hi),
                                Base::Lambda => Err(Error::InvalidMeasure("base lambda is half-plane only".into())),
                            }
                        }
                        DensitySpec::Jacobi {
                            coeff,
                            alpha,
                            beta,
                            support,
                        } => DiscPiece::new(coeff, 0.0, alpha, beta, support[0].0, support[1].0),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Measure::Disc(DiscMeasure::new(atoms, pieces)?))
            }
        }
    }
}

impl From<&HalfPlaneMeasure> for MeasureSpec {
    fn from(m: &HalfPlaneMeasure) -> Self {
        MeasureSpec {
            domain: Domain::HalfPlane,
            atoms: m
                .atoms()
                .iter()
                .map(|a| AtomSpec {
                    pos: a.pos,
                    mass: a.mass,
                })
                .collect(),
            densities: m
                .pieces()
                .iter()
                .map(|p| DensitySpec::Power {
                    coeff: p.coeff,
                    exponent: p.exponent,
                    base: Base::Lambda,
                    support: [Bound(p.lo), Bound(p.hi)],
                })
                .collect(),
        }
    }
}

impl From<&DiscMeasure> for MeasureSpec {
    fn from(m: &DiscMeasure) -> Self {
        let density = |p: &DiscPiece| {
            let support = [Bound(p.lo), Bound(p.hi)];
            let power = |exponent, base| DensitySpec::Power {
                coeff: p.coeff,
                exponent,
                base,
                support,
            };
            match (p.x_exp != 0.0, p.one_minus_exp != 0.0, p.one_plus_exp != 0.0) {
                (_, false, false) => power(p.x_exp, Base::X),
                (false, true, false) => power(p.one_minus_exp, Base::OneMinusX),
                (false, false, true) => power(p.one_plus_exp, Base::OnePlusX),
                _ => DensitySpec::Jacobi {
                    coeff: p.coeff,
                    alpha: p.one_minus_exp,
                    beta: p.one_plus_exp,
                    support,
                },
            }
        };
        MeasureSpec {
            domain: Domain::Disc,
            atoms: m
                .atoms()
                .iter()
                .map(|a| AtomSpec {
                    pos: a.pos,
                    mass: a.mass,
                })
                .collect(),
            densities: m.pieces().iter().map(density).collect(),
        }
    }
}
