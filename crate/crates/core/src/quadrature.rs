//! Adaptive Gauss–Legendre quadrature for complex-valued integrands.
//!
//! Every integral is seeded with panels split at the caller's breakpoints and
//! graded dyadically toward each segment end, then refined globally: the panel
//! with the largest error estimate is bisected until the summed estimate meets
//! `max(abs_tol, rel_tol * |I|)`. The estimate of a panel is the difference
//! between its 16-point rule and the sum of the rules on its two halves; the
//! accepted value is the sum over halves.
//!
//! Infinite endpoints are handled by the substitution `x = tan(theta)`, so the
//! integrand on `[a, inf)` becomes `f(tan theta) sec^2 theta` on
//! `[atan a, pi/2)`. Gauss nodes never touch the endpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const GL_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Number of dyadic grading levels toward both ends of every seed segment.
    pub grading: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_panels: 20_000,
            grading: 4,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn graded(mut self, levels: usize) -> Self {
        self.grading = levels;
        self
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

fn gl_panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let (x, w) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = Complex64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        acc += f(mid + half * xi) * *wi;
    }
    acc * half
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    left: Complex64,
    right: Complex64,
    err: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, whole: Complex64) -> Self {
        let m = 0.5 * (a + b);
        let left = gl_panel(f, a, m);
        let right = gl_panel(f, m, b);
        let err = (whole - left - right).norm();
        Panel {
            a,
            b,
            left,
            right,
            err: if err.is_finite() { err } else { f64::INFINITY },
        }
    }

    fn value(&self) -> Complex64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn seed_points(a: f64, b: f64, breaks: &[f64], grading: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut pts = Vec::with_capacity(cuts.len() * (2 * grading + 2));
    for w in cuts.windows(2) {
        let (s, e) = (w[0], w[1]);
        let m = 0.5 * (s + e);
        pts.push(s);
        for k in (1..=grading).rev() {
            pts.push(s + (m - s) * 0.5f64.powi(k as i32));
        }
        pts.push(m);
        for k in 1..=grading {
            pts.push(e - (e - m) * 0.5f64.powi(k as i32));
        }
    }
    pts.push(b);
    pts.dedup();
    pts
}

/// Integrates `f` over a finite interval `[a, b]` with optional interior
/// breakpoints.
fn integrate_finite<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            panels: 0,
        });
    }
    let pts = seed_points(a, b, breaks, opts.grading);
    let mut heap = BinaryHeap::with_capacity(pts.len() * 4);
    for w in pts.windows(2) {
        let whole = gl_panel(f, w[0], w[1]);
        heap.push(Panel::new(f, w[0], w[1], whole));
    }
    let mut frozen_val = Complex64::new(0.0, 0.0);
    let mut frozen_err = 0.0;
    let mut count = heap.len();

    loop {
        let total: Complex64 = heap.iter().map(Panel::value).sum::<Complex64>() + frozen_val;
        let err: f64 = heap.iter().map(|p| p.err).sum::<f64>() + frozen_err;
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= tol {
            return Ok(Integral {
                value: total,
                error: err,
                panels: count,
            });
        }
        if count >= opts.max_panels || !total.norm().is_finite() {
            return Err(Error::Quadrature {
                estimate: total.norm(),
                error: err,
                panels: count,
            });
        }
        // Split the worst panels in a batch so the bookkeeping above stays cheap.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let m = 0.5 * (worst.a + worst.b);
            if !(m > worst.a && m < worst.b) || (worst.b - worst.a) < 1e-15 * worst.a.abs().max(1e-300) {
                frozen_val += worst.value();
                frozen_err += worst.err;
                continue;
            }
            heap.push(Panel::new(f, worst.a, m, worst.left));
            heap.push(Panel::new(f, m, worst.b, worst.right));
            count += 1;
        }
    }
}

/// Integrates `f` over `[a, b]`, where either endpoint may be infinite.
///
/// Breakpoints mark locations where `f` has kinks, jumps or sharp peaks; the
/// seed panels are split there.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Integral> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::InvalidArgument("NaN integration bound".into()));
    }
    if a > b {
        let r = integrate(f, b, a, breaks, opts)?;
        return Ok(Integral { value: -r.value, ..r });
    }
    if a.is_finite() && b.is_finite() {
        return integrate_finite(&f, a, b, breaks, opts);
    }
    let ta = if a.is_finite() { a.atan() } else { -FRAC_PI_2 };
    let tb = if b.is_finite() { b.atan() } else { FRAC_PI_2 };
    let mapped: Vec<f64> = breaks.iter().map(|x| x.atan()).collect();
    let g = |theta: f64| {
        let c = theta.cos();
        f(theta.tan()) / (c * c)
    };
    integrate_finite(&g, ta, tb, &mapped, opts)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], opts: &QuadOptions) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, breaks, opts).map(|r| r.value.re)
}

/// Integrates `f(x) (x - a)^p (b - x)^q` over the finite interval `[a, b]`.
///
/// Each half of the interval is mapped so that the endpoint power is absorbed
/// into the measure: on the left half `x = a + v^{1/(p+1)}`, giving
/// `(x - a)^p dx = dv / (p + 1)`; symmetrically on the right half.
pub fn integrate_endpoint_powers<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    p: f64,
    q: f64,
    opts: &QuadOptions,
) -> Result<Complex64> {
    if !(a < b) || !(p > -1.0) || !(q > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "endpoint-power integral needs a < b and exponents > -1 (a={a}, b={b}, p={p}, q={q})"
        )));
    }
    let m = 0.5 * (a + b);
    let half = m - a;
    let left = integrate(
        |v: f64| {
            let x = a + v.max(0.0).powf(1.0 / (p + 1.0));
            f(x) * (b - x).powf(q) / (p + 1.0)
        },
        0.0,
        half.powf(p + 1.0),
        &[],
        opts,
    )?;
    let right = integrate(
        |v: f64| {
            let x = b - v.max(0.0).powf(1.0 / (q + 1.0));
            f(x) * (x - a).powf(p) / (q + 1.0)
        },
        0.0,
        half.powf(q + 1.0),
        &[],
        opts,
    )?;
    Ok(left.value + right.value)
}

/// Limit of a slowly converging sequence of partial sums by Wynn's epsilon
/// algorithm. Returns the last even-column entry of the table.
pub fn wynn_epsilon(partial_sums: &[Complex64]) -> Complex64 {
    let n = partial_sums.len();
    if n < 3 {
        return partial_sums.last().copied().unwrap_or_default();
    }
    // eps[k] holds column k of the table; columns shrink by one each step.
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = partial_sums.to_vec();
    let mut best = cur[n - 1];
    let mut col = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d.norm() < 1e-300 {
                return cur[i + 1];
            }
            next.push(prev[i + 1] + d.inv());
        }
        prev = cur;
        cur = next;
        col += 1;
        if col.is_multiple_of(2) {
            best = *cur.last().unwrap();
        }
    }
    best
}

/// `int_0^inf f(x) cos(t x) dx` for a slowly decaying, non-oscillatory `f`,
/// summed over half periods and accelerated with [`wynn_epsilon`].
pub fn fourier_cos_half_line<F: Fn(f64) -> Complex64>(
    f: F,
    t: f64,
    cycles: usize,
    opts: &QuadOptions,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("frequency must be positive, got {t}")));
    }
    let step = std::f64::consts::PI / t;
    let mut partial = Vec::with_capacity(cycles);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..cycles {
        let lo = k as f64 * step;
        let piece = integrate(|x| f(x) * (t * x).cos(), lo, lo + step, &[], opts)?;
        acc += piece.value;
        partial.push(acc);
    }
    Ok(wynn_epsilon(&partial))
}
