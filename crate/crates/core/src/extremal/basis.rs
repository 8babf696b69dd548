//! Even perturbation bases for log-radial candidates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphgrid::{Scheme, SphericalGrid};

/// Upper bound on the number of basis functions for `n ≥ 3`.
pub const MAX_COEFFICIENTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Basis {
    /// `cos 2kθ, sin 2kθ` for `k = 1..=count` (planar only).
    Harmonics { count: usize },
    /// One coefficient per antipodal node pair (planar uniform grids only).
    GridValues,
    /// Monomials of even total degree `2, 4, …, max_degree`.
    EvenMonomials { max_degree: usize },
}

impl Basis {
    pub fn default_for(dimension: usize) -> Basis {
        if dimension == 2 {
            Basis::Harmonics { count: 16 }
        } else {
            Basis::EvenMonomials { max_degree: 6 }
        }
    }
}

/// Sparse columns: column `k` lists `(node, value)` pairs.
#[derive(Debug, Clone)]
pub(crate) struct Columns {
    pub cols: Vec<Vec<(usize, f64)>>,
}

impl Columns {
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    /// `out = base + Σ_k x_k col_k`.
    pub fn combine(&self, base: &[f64], x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend_from_slice(base);
        for (c, xk) in self.cols.iter().zip(x) {
            if *xk != 0.0 {
                for &(i, v) in c {
                    out[i] += xk * v;
                }
            }
        }
    }
}

pub(crate) fn columns(basis: Basis, grid: &SphericalGrid) -> Result<Columns> {
    let n = grid.dimension();
    let cols = match basis {
        Basis::Harmonics { count } => {
            if n != 2 {
                return Err(Error::Configuration("harmonic basis is planar".into()));
            }
            if count == 0 {
                return Err(Error::Configuration(
                    "harmonic basis needs at least one term".into(),
                ));
            }
            let theta: Vec<f64> = grid.nodes().map(|u| u[1].atan2(u[0])).collect();
            let mut cols = Vec::with_capacity(2 * count);
            for k in 1..=count {
                let m = 2.0 * k as f64;
                cols.push(
                    theta
                        .iter()
                        .enumerate()
                        .map(|(i, t)| (i, (m * t).cos()))
                        .collect(),
                );
                cols.push(
                    theta
                        .iter()
                        .enumerate()
                        .map(|(i, t)| (i, (m * t).sin()))
                        .collect(),
                );
            }
            cols
        }
        Basis::GridValues => {
            let len = grid.len();
            if n != 2 || grid.scheme() != Scheme::UniformAngle || len % 2 != 0 {
                return Err(Error::Configuration(
                    "grid-value basis needs a planar uniform-angle grid with an even node count"
                        .into(),
                ));
            }
            (0..len / 2)
                .map(|i| vec![(i, 1.0), (i + len / 2, 1.0)])
                .collect()
        }
        Basis::EvenMonomials { max_degree } => {
            if max_degree < 2 {
                return Err(Error::Configuration(
                    "monomial basis needs degree >= 2".into(),
                ));
            }
            let mut cols = Vec::new();
            'outer: for d in (2..=max_degree).step_by(2) {
                for exps in exponents(n, d) {
                    if cols.len() == MAX_COEFFICIENTS {
                        break 'outer;
                    }
                    cols.push(
                        grid.nodes()
                            .enumerate()
                            .map(|(i, u)| {
                                (
                                    i,
                                    u.iter()
                                        .zip(&exps)
                                        .map(|(x, e)| x.powi(*e as i32))
                                        .product(),
                                )
                            })
                            .collect(),
                    );
                }
            }
            cols
        }
    };
    Ok(Columns { cols })
}

/// All exponent vectors of length `n` summing to `d`, in lexicographic order.
fn exponents(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponents(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
