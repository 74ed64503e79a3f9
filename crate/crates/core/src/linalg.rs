//! Dense spectral routines for the finite sections.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenvalues of a hermitian matrix in ascending order.
///
/// The strictly lower triangle is ignored; the matrix is symmetrized from the
/// upper triangle before the solve.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let mut h = m.clone();
    for j in 0..n {
        h[(j, j)] = Complex64::new(h[(j, j)].re, 0.0);
        for k in (j + 1)..n {
            h[(k, j)] = h[(j, k)].conj();
        }
    }
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// Largest deviation from hermitian symmetry, `max |m_jk - conj(m_kj)|`.
pub fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut d: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            d = d.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    d
}

/// Spectral norm by power iteration on `M^H M`.
///
/// Iterates until the Rayleigh quotient changes by less than `rel_tol`
/// relative, or `max_iter` steps. The start vector has all entries positive,
/// which overlaps the Perron vector of entrywise-positive matrices.
pub fn spectral_norm(m: &DMatrix<Complex64>, rel_tol: f64, max_iter: usize) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 1e-3 * i as f64, 0.0));
    v /= Complex64::new(v.norm(), 0.0);
    let mh = m.adjoint();
    let mut last = 0.0;
    for it in 0..max_iter {
        let w = &mh * (m * &v);
        let rq = v.dotc(&w).re;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(norm, 0.0);
        if it > 0 && (rq - last).abs() <= rel_tol * rq.abs() {
            return rq.max(0.0).sqrt();
        }
        last = rq;
    }
    last.max(0.0).sqrt()
}
