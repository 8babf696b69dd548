//! Candidates of the form `exp(S)·B` with `S` symmetric and traceless.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::bodies::{LinearMap, StarBody};
use crate::error::Result;
use crate::sphgrid::SphericalGrid;

pub(crate) fn param_count(n: usize) -> usize {
    n * (n + 1) / 2 - 1
}

/// Diagonal entries `0..n-1` first (the last one balances the trace), then
/// the upper triangle row by row.
pub(crate) fn matrix_from_params(n: usize, x: &[f64]) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(n, n);
    let mut trace = 0.0;
    for i in 0..n - 1 {
        s[(i, i)] = x[i];
        trace += x[i];
    }
    s[(n - 1, n - 1)] = -trace;
    let mut k = n - 1;
    for i in 0..n {
        for j in i + 1..n {
            s[(i, j)] = x[k];
            s[(j, i)] = x[k];
            k += 1;
        }
    }
    s
}

pub(crate) fn params_from_matrix(s: &DMatrix<f64>) -> Vec<f64> {
    let n = s.nrows();
    let shift = s.trace() / n as f64;
    let mut x: Vec<f64> = (0..n - 1).map(|i| s[(i, i)] - shift).collect();
    for i in 0..n {
        for j in i + 1..n {
            x.push(0.5 * (s[(i, j)] + s[(j, i)]));
        }
    }
    x
}

/// `f(S)` for symmetric `S`, applied through the eigenvalues.
fn spectral(s: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(s.clone());
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// `(exp S, exp(−S))`.
pub(crate) fn exp_pair(s: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (spectral(s, f64::exp), spectral(s, |v| (-v).exp()))
}

/// Radial and support samples of `A·B` for symmetric positive definite `A`:
/// `ρ(u) = 1/|A⁻¹u|`, `h(u) = |Au|`.
pub(crate) fn samples(
    grid: &SphericalGrid,
    a: &DMatrix<f64>,
    a_inv: &DMatrix<f64>,
) -> (Vec<f64>, Vec<f64>) {
    let n = grid.dimension();
    let mut rho = Vec::with_capacity(grid.len());
    let mut h = Vec::with_capacity(grid.len());
    for u in grid.nodes() {
        let (mut r2, mut h2) = (0.0, 0.0);
        for i in 0..n {
            let (mut p, mut q) = (0.0, 0.0);
            for j in 0..n {
                p += a_inv[(i, j)] * u[j];
                q += a[(i, j)] * u[j];
            }
            r2 += p * p;
            h2 += q * q;
        }
        rho.push(1.0 / r2.sqrt());
        h.push(h2.sqrt());
    }
    (rho, h)
}

/// Parameters of the traceless part of `½ log M`, where
/// `M = ∫ ρ^{n+2} u uᵀ dσ / (n+2)` is the second-moment matrix of the body.
/// For `K = A·B` with `A` symmetric this recovers `A` up to scale.
pub(crate) fn warm_start(grid: &SphericalGrid, rho: &[f64]) -> Vec<f64> {
    let n = grid.dimension();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = grid.weighted_sum(|k| {
                let u = grid.node(k);
                rho[k].powi(n as i32 + 2) * u[i] * u[j]
            }) / (n as f64 + 2.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let log_half = spectral(&m, |v| 0.5 * v.max(1e-300).ln());
    params_from_matrix(&log_half)
}

pub(crate) fn body(a: &DMatrix<f64>) -> Result<StarBody> {
    StarBody::ellipsoid(LinearMap::new(a.clone())?)
}
