//! Grid suprema with local refinement.

use crate::error::Result;

/// `n` points log-spaced on `[lo, hi]`, both ends included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == n - 1 {
                hi
            } else {
                (a + (b - a) * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Maximizes `f` on `[a, b]` by golden-section search; returns the best
/// `(x, f(x))` seen, including both endpoints.
pub fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, iters: usize) -> Result<(f64, f64)> {
    const R: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut best = (a, f(a)?);
    let fb = f(b)?;
    if fb > best.1 {
        best = (b, fb);
    }
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iters {
        if f1 > best.1 {
            best = (x1, f1);
        }
        if f2 > best.1 {
            best = (x2, f2);
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - R * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + R * (hi - lo);
            f2 = f(x2)?;
        }
        if hi - lo <= 1e-15 * (lo.abs() + hi.abs()) {
            break;
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

/// Supremum of `f` over sorted `probes` given precomputed `values`, refined by
/// a golden-section search between the neighbours of the best probe.
pub fn polished_sup<F: Fn(f64) -> Result<f64>>(f: F, probes: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    let Some((i, &v)) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return Ok((f64::NAN, 0.0));
    };
    let mut best = (probes[i], v);
    if i > 0 && i + 1 < probes.len() {
        for (a, b) in [(probes[i - 1], probes[i]), (probes[i], probes[i + 1])] {
            let cand = golden_max(&f, a, b, 80)?;
            if cand.1 > best.1 {
                best = cand;
            }
        }
    }
    Ok(best)
}
