//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the code under test.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Composite Simpson rule with `n` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Composite 5-point Gauss-Legendre rule on `panels` equal panels; never
/// evaluates at the endpoints.
pub fn gauss5<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.236_926_885_056_189_1,
        0.478_628_670_499_366_5,
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in X.iter().zip(W) {
            acc += w * f(mid + 0.5 * h * x);
        }
    }
    acc * 0.5 * h
}

/// `int_0^{2pi} f(e^{it}) dt` by the trapezoidal rule with `n` nodes.
pub fn circle_sum<F: Fn(Complex64) -> Complex64>(f: F, n: usize) -> Complex64 {
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| f(Complex64::from_polar(1.0, k as f64 * h)))
        .sum::<Complex64>()
        * h
}

/// `f(z) = sum a_n z^n` by direct powers.
pub fn poly(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().enumerate().map(|(n, &an)| an * z.powu(n as u32)).sum()
}

/// Moments of Lebesgue measure on `[a, b]`.
pub fn lebesgue_moment(a: f64, b: f64, j: usize) -> f64 {
    let p = j as i32 + 1;
    (b.powi(p) - a.powi(p)) / p as f64
}

/// Eigenvalues of the real symmetric 2x2 matrix `[[a, b], [b, d]]`.
pub fn eig2(a: f64, b: f64, d: f64) -> (f64, f64) {
    let m = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (m - r, m + r)
}

/// Largest eigenvalue of a real symmetric matrix by plain power iteration on
/// `A + shift I`, the shift making the spectrum nonnegative.
pub fn power_max(a: &[Vec<f64>], iters: usize) -> f64 {
    let n = a.len();
    let shift: f64 = a
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut v = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| a[i][j] * v[j]).sum::<f64>() + shift * v[i])
            .collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        lambda = w.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
        v = w.iter().map(|x| x / norm).collect();
    }
    lambda - shift
}

pub fn upper_point() -> impl Strategy<Value = Complex64> {
    (-5.0..5.0f64, 0.05..5.0f64).prop_map(|(x, y)| c(x, y))
}

pub fn right_point() -> impl Strategy<Value = Complex64> {
    (0.05..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| c(x, y))
}

pub fn disc_point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r_max, 0.0..2.0 * PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

pub fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b)), 1..=max_len)
}

/// `(position, mass)` pairs with positions in `(lo, hi)`.
pub fn atoms(lo: f64, hi: f64, max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((lo..hi, 0.05..3.0f64), 1..=max)
}
