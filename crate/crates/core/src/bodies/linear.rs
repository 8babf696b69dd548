use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// An invertible linear map `T ∈ GL(n)` with its inverse cached.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    det_abs: f64,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Configuration(format!(
                "linear map must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Configuration(
                "linear map has non-finite entries".into(),
            ));
        }
        let det_abs = matrix.determinant().abs();
        let scale = matrix.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let n = matrix.nrows() as i32;
        if det_abs <= 1e-13 * scale.powi(n) || det_abs == 0.0 {
            return Err(Error::Configuration("linear map is singular".into()));
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Configuration("linear map is singular".into()))?;
        Ok(LinearMap {
            matrix,
            inverse,
            det_abs,
        })
    }

    /// Row-major construction.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Configuration(
                "linear map rows must form a square matrix".into(),
            ));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is invertible")
    }

    pub fn scalar(n: usize, lambda: f64) -> Result<Self> {
        Self::new(DMatrix::identity(n, n) * lambda)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(
            &nalgebra::DVector::from_column_slice(entries),
        ))
    }

    /// Planar rotation by `theta` radians.
    pub fn rotation_2d(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(DMatrix::from_row_slice(2, 2, &[c, -s, s, c])).expect("rotation is invertible")
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn det_abs(&self) -> f64 {
        self.det_abs
    }

    /// `Some(λ)` when the map is `λ·I`.
    pub fn as_scalar(&self) -> Option<f64> {
        let n = self.dimension();
        let lambda = self.matrix[(0, 0)];
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { lambda } else { 0.0 };
                if self.matrix[(i, j)] != expect {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.matrix, x, false)
    }

    pub fn apply_inverse(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.inverse, x, false)
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.matrix, x, true)
    }

    pub fn apply_inverse_transpose(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.inverse, x, true)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
            det_abs: self.det_abs * other.det_abs,
        }
    }

    pub fn inverse(&self) -> LinearMap {
        LinearMap {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            det_abs: 1.0 / self.det_abs,
        }
    }

    /// `T^{-*}`, the map taking `K°` to `(TK)°`.
    pub fn inverse_transpose(&self) -> LinearMap {
        LinearMap {
            matrix: self.inverse.transpose(),
            inverse: self.matrix.transpose(),
            det_abs: 1.0 / self.det_abs,
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.dimension();
        (0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)]).collect())
            .collect()
    }
}

fn mat_vec(m: &DMatrix<f64>, x: &[f64], transpose: bool) -> Vec<f64> {
    let n = m.nrows();
    debug_assert_eq!(x.len(), n);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if transpose { m[(j, i)] } else { m[(i, j)] } * x[j])
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let t = LinearMap::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!((t.det_abs() - 1.0).abs() < 1e-12);
        let x = [0.3, -0.7];
        let back = t.apply_inverse(&t.apply(&x));
        assert!((back[0] - x[0]).abs() < 1e-14 && (back[1] - x[1]).abs() < 1e-14);
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            LinearMap::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn scalar_detection() {
        assert_eq!(LinearMap::scalar(3, 2.5).unwrap().as_scalar(), Some(2.5));
        assert_eq!(LinearMap::diagonal(&[2.0, 0.5]).unwrap().as_scalar(), None);
    }
}
