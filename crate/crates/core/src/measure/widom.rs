//! Head/tail growth constants and the boundedness verdict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DiscMeasure, Domain, HalfPlaneMeasure, Measure, RhoInterval, MOMENT_CAP};
use crate::error::{Error, Result};
use crate::search::{log_grid, polished_sup};

/// Probe grids for the two refinement levels.
///
/// Half-plane probes are log-spaced on `[scale, 1/scale]`; disc probes are
/// distances `d` from the endpoints `-1` and `1`, log-spaced on
/// `[scale, 2 - scale]`. Moment indices are log-spaced on
/// `[1, max_moment]`, plus `j = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub coarse_points: usize,
    pub fine_points: usize,
    pub coarse_scale: f64,
    pub fine_scale: f64,
    pub coarse_max_moment: usize,
    pub fine_max_moment: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            coarse_points: 64,
            fine_points: 128,
            coarse_scale: 1e-3,
            fine_scale: 1e-6,
            coarse_max_moment: 64,
            fine_max_moment: MOMENT_CAP,
        }
    }
}

impl GridSpec {
    /// Same refinement pattern with `points` coarse probes and twice as many
    /// fine ones.
    pub fn with_points(points: usize) -> Self {
        GridSpec {
            coarse_points: points,
            fine_points: 2 * points,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.coarse_points < 16 || self.fine_points < self.coarse_points {
            return Err(Error::InvalidArgument(format!(
                "Widom grids need at least 16 coarse probes and a finer second grid (got {} and {})",
                self.coarse_points, self.fine_points
            )));
        }
        if !(self.fine_scale > 0.0 && self.fine_scale <= self.coarse_scale && self.coarse_scale < 1.0) {
            return Err(Error::InvalidArgument(
                "grid scales must satisfy 0 < fine <= coarse < 1".into(),
            ));
        }
        if self.fine_max_moment > MOMENT_CAP || self.coarse_max_moment > self.fine_max_moment {
            return Err(Error::InvalidArgument(format!(
                "moment ranges must satisfy coarse <= fine <= {MOMENT_CAP}"
            )));
        }
        Ok(())
    }
}

/// Suprema found on one grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sup {
    pub beta: f64,
    pub gamma: f64,
    /// `sup_j (j+1)|c_j|`, disc only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_sup: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WidomVerdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

impl std::fmt::Display for WidomVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WidomVerdict::Bounded => "bounded",
            WidomVerdict::Unbounded => "unbounded",
            WidomVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidomReport {
    pub domain: Domain,
    /// Fine-grid head constant.
    pub beta: f64,
    /// Fine-grid tail constant.
    pub gamma: f64,
    pub alpha_estimate: f64,
    /// `rho(R_+)` on the half line, total mass on the interval.
    pub rho_total: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_sup: Option<f64>,
    pub verdict: WidomVerdict,
    pub grid: GridSpec,
    pub coarse: Sup,
}

impl WidomReport {
    pub fn is_bounded(&self) -> bool {
        self.verdict == WidomVerdict::Bounded
    }

    /// Fails with [`Error::NotBounded`] unless the verdict is bounded.
    pub fn require_bounded(&self) -> Result<()> {
        if self.is_bounded() {
            Ok(())
        } else {
            Err(Error::NotBounded(self.verdict.to_string()))
        }
    }

    pub fn fine(&self) -> Sup {
        Sup {
            beta: self.beta,
            gamma: self.gamma,
            moment_sup: self.moment_sup,
        }
    }
}

/// Runs the Widom estimators on both grids and compares them.
pub fn widom_check(mu: &Measure, grid: &GridSpec) -> Result<WidomReport> {
    match mu {
        Measure::HalfPlane(m) => halfplane_check(m, grid),
        Measure::Disc(m) => disc_check(m, grid),
    }
}

fn verdict(coarse: &Sup, fine: &Sup) -> WidomVerdict {
    let pairs = [
        (coarse.beta, fine.beta),
        (coarse.gamma, fine.gamma),
        (coarse.moment_sup.unwrap_or(0.0), fine.moment_sup.unwrap_or(0.0)),
    ];
    let mut stable = true;
    for (c, f) in pairs {
        if !f.is_finite() || !c.is_finite() {
            return WidomVerdict::Unbounded;
        }
        let change = if c == f {
            0.0
        } else {
            (f - c) / c.abs().max(f64::MIN_POSITIVE)
        };
        if change >= 0.10 {
            return WidomVerdict::Unbounded;
        }
        if change.abs() >= 0.01 {
            stable = false;
        }
    }
    if stable {
        WidomVerdict::Bounded
    } else {
        WidomVerdict::Inconclusive
    }
}

fn with_extra(mut probes: Vec<f64>, extra: impl IntoIterator<Item = f64>, lo: f64, hi: f64) -> Vec<f64> {
    probes.extend(extra.into_iter().filter(|x| *x >= lo && *x <= hi));
    probes.sort_by(f64::total_cmp);
    probes.dedup();
    probes
}

fn grid_sup<F: Fn(f64) -> Result<f64> + Sync>(f: F, probes: &[f64]) -> Result<f64> {
    let values = probes.par_iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    Ok(polished_sup(&f, probes, &values)?.1.max(0.0))
}

fn moment_indices(max: usize, points: usize) -> Vec<usize> {
    let mut js: Vec<usize> = log_grid(1.0, max.max(1) as f64, points)
        .into_iter()
        .map(|x| x.round() as usize)
        .collect();
    js.push(0);
    js.sort_unstable();
    js.dedup();
    js
}

fn halfplane_sup(m: &HalfPlaneMeasure, scale: f64, points: usize) -> Result<Sup> {
    let (lo, hi) = (scale, 1.0 / scale);
    let probes = with_extra(log_grid(lo, hi, points), m.breakpoints(), lo, hi);
    let beta = grid_sup(|e| Ok(m.rho(RhoInterval::Head(e))? / e), &probes)?;
    let gamma = grid_sup(|t| Ok(t * m.rho(RhoInterval::Tail(t))?), &probes)?;
    Ok(Sup {
        beta,
        gamma,
        moment_sup: None,
    })
}

fn halfplane_check(m: &HalfPlaneMeasure, grid: &GridSpec) -> Result<WidomReport> {
    grid.validate()?;
    let coarse = halfplane_sup(m, grid.coarse_scale, grid.coarse_points)?;
    let fine = halfplane_sup(m, grid.fine_scale, grid.fine_points)?;
    let push = m.cayley_pushforward();
    let abs_sup = abs_moment_sup(&push, grid.fine_max_moment, grid.fine_points)?;
    Ok(WidomReport {
        domain: Domain::HalfPlane,
        beta: fine.beta,
        gamma: fine.gamma,
        alpha_estimate: 0.5 * abs_sup,
        rho_total: m.rho_total()?,
        moment_sup: None,
        verdict: verdict(&coarse, &fine),
        grid: *grid,
        coarse,
    })
}

fn abs_moment_sup(m: &DiscMeasure, max: usize, points: usize) -> Result<f64> {
    let js = moment_indices(max, points);
    let vals = js
        .par_iter()
        .map(|&j| Ok((j as f64 + 1.0) * m.abs_moment(j)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

fn disc_sup(m: &DiscMeasure, scale: f64, points: usize, max_moment: usize) -> Result<Sup> {
    let (lo, hi) = (scale, 2.0 - scale);
    let bp = m.breakpoints();
    let beta_probes = with_extra(log_grid(lo, hi, points), bp.iter().map(|x| 1.0 + x), lo, hi);
    let gamma_probes = with_extra(log_grid(lo, hi, points), bp.iter().map(|x| 1.0 - x), lo, hi);
    let beta = grid_sup(
        |d| {
            let x = -1.0 + d;
            Ok(m.mass_between(-1.0, x)? / (1.0 + x))
        },
        &beta_probes,
    )?;
    let gamma = grid_sup(
        |d| {
            let x = 1.0 - d;
            Ok(m.mass_between(x, 1.0)? / (1.0 - x))
        },
        &gamma_probes,
    )?;
    let js = moment_indices(max_moment, points);
    let ms = js
        .par_iter()
        .map(|&j| Ok((j as f64 + 1.0) * m.moment(j)?.abs()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Sup {
        beta,
        gamma,
        moment_sup: Some(ms.into_iter().fold(0.0, f64::max)),
    })
}

fn disc_check(m: &DiscMeasure, grid: &GridSpec) -> Result<WidomReport> {
    grid.validate()?;
    let coarse = disc_sup(m, grid.coarse_scale, grid.coarse_points, grid.coarse_max_moment)?;
    let fine = disc_sup(m, grid.fine_scale, grid.fine_points, grid.fine_max_moment)?;
    let abs_sup = abs_moment_sup(m, grid.fine_max_moment, grid.fine_points)?;
    Ok(WidomReport {
        domain: Domain::Disc,
        beta: fine.beta,
        gamma: fine.gamma,
        alpha_estimate: std::f64::consts::PI * abs_sup,
        rho_total: m.total_mass()?,
        moment_sup: fine.moment_sup,
        verdict: verdict(&coarse, &fine),
        grid: *grid,
        coarse,
    })
}
