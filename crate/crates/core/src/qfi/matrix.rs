use std::ops::Index;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Determinant guard for 3x3 Fisher inversion.
pub const DET_GUARD: f64 = 1e-12;

/// Axis labels of a [`QfiMatrix`].
pub const ANGLE_LABELS: [&str; 3] = ["alpha", "beta", "gamma"];

/// Real symmetric 3x3 Fisher matrix indexed by (alpha, beta, gamma).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[[f64; 3]; 3]", from = "[[f64; 3]; 3]")]
pub struct QfiMatrix(pub Matrix3<f64>);

impl QfiMatrix {
    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Self(Matrix3::from_fn(|i, j| rows[i][j]))
    }

    pub fn zeros() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        let m = &self.0;
        [0, 1, 2].map(|i| [0, 1, 2].map(|j| m[(i, j)]))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Inverse by adjugate, refusing `|det| <= 1e-12`.
    pub fn inverse(&self) -> Result<Matrix3<f64>> {
        let m = &self.0;
        let det = self.determinant();
        if det.is_nan() || det.abs() <= DET_GUARD {
            return Err(Error::SingularFisher { det });
        }
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
        };
        let adj = Matrix3::new(
            cof(1, 2, 1, 2),
            -cof(0, 2, 1, 2),
            cof(0, 1, 1, 2),
            -cof(1, 2, 0, 2),
            cof(0, 2, 0, 2),
            -cof(0, 1, 0, 2),
            cof(1, 2, 0, 1),
            -cof(0, 2, 0, 1),
            cof(0, 1, 0, 1),
        );
        Ok(adj / det)
    }

    pub fn trace_inverse(&self) -> Result<f64> {
        Ok(self.inverse()?.trace())
    }

    pub fn asymmetry(&self) -> f64 {
        (self.0 - self.0.transpose()).abs().max()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let sym = (self.0 + self.0.transpose()) * 0.5;
        SymmetricEigen::new(sym).eigenvalues.min()
    }

    /// Symmetric within 1e-10 and eigenvalues >= -1e-9.
    pub fn is_valid(&self) -> bool {
        self.asymmetry() <= 1e-10 && self.min_eigenvalue() >= -1e-9
    }

    pub fn max_abs_diff(&self, other: &QfiMatrix) -> f64 {
        (self.0 - other.0).abs().max()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0 * factor)
    }
}

impl Index<(usize, usize)> for QfiMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

impl From<QfiMatrix> for [[f64; 3]; 3] {
    fn from(m: QfiMatrix) -> Self {
        m.rows()
    }
}

impl From<[[f64; 3]; 3]> for QfiMatrix {
    fn from(rows: [[f64; 3]; 3]) -> Self {
        Self::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_inverse() {
        let f = QfiMatrix::from_rows([[4.0, 1.0, 0.5], [1.0, 3.0, 0.0], [0.5, 0.0, 2.0]]);
        let inv = f.inverse().unwrap();
        let id = f.0 * inv;
        assert!((id - Matrix3::identity()).abs().max() < 1e-14);
    }

    #[test]
    fn singular_is_refused() {
        let f = QfiMatrix::from_rows([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]]);
        assert!(matches!(f.inverse(), Err(Error::SingularFisher { .. })));
    }

    #[test]
    fn serde_as_rows() {
        let f = QfiMatrix::from_rows([[1.0, 2.0, 3.0], [2.0, 5.0, 6.0], [3.0, 6.0, 9.0]]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[1.0,2.0,3.0],[2.0,5.0,6.0],[3.0,6.0,9.0]]");
        let back: QfiMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
