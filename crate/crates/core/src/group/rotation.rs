use nalgebra::{DMatrix, DVector};

use super::{check_dim, Sign, MEMBERSHIP_TOL};
use crate::error::{GroupError, Result};
use crate::linalg::{ensure_finite, ensure_square, orthogonality_residual};

/// An element of O(n), stored as a full `n x n` matrix.
///
/// The determinant sign is the parity component `ε̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    matrix: DMatrix<f64>,
}

impl Rotation {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(matrix, MEMBERSHIP_TOL)
    }

    pub fn with_tolerance(matrix: DMatrix<f64>, tol: f64) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        if n == 0 {
            return Err(GroupError::ZeroDimension);
        }
        ensure_finite(matrix.iter(), "rotation matrix")?;
        let residual = orthogonality_residual(&matrix);
        if residual > tol {
            return Err(GroupError::NotOrthogonal { residual });
        }
        let det = matrix.determinant();
        if (det.abs() - 1.0).abs() > tol {
            return Err(GroupError::NotOrthogonal {
                residual: (det.abs() - 1.0).abs(),
            });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<f64>) -> Self {
        Self { matrix }
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::ZeroDimension);
        }
        Ok(Self {
            matrix: DMatrix::identity(n, n),
        })
    }

    /// Planar rotation by `theta` (counter-clockwise).
    pub fn planar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            matrix: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// Sign of the determinant.
    pub fn parity(&self) -> Sign {
        if self.matrix.determinant() < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn orthogonality_residual(&self) -> f64 {
        orthogonality_residual(&self.matrix)
    }

    /// `R⁻¹ = ᵗR`.
    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
        }
    }

    pub fn compose(&self, rhs: &Rotation) -> Result<Self> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Self {
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let n = self.dim();
        crate::linalg::max_abs_diff(&self.matrix, &DMatrix::identity(n, n)) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_orthogonal() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            Rotation::new(m),
            Err(GroupError::NotOrthogonal { .. })
        ));
        assert!(matches!(
            Rotation::new(DMatrix::zeros(2, 3)),
            Err(GroupError::NotSquare { .. })
        ));
        assert!(matches!(
            Rotation::identity(0),
            Err(GroupError::ZeroDimension)
        ));
    }

    #[test]
    fn parity_of_reflection() {
        let m = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        let r = Rotation::new(m).unwrap();
        assert_eq!(r.parity(), Sign::Minus);
        assert_eq!(Rotation::planar(0.3).parity(), Sign::Plus);
    }

    #[test]
    fn quarter_turn_inverse() {
        let r = Rotation::planar(std::f64::consts::FRAC_PI_2);
        let prod = r.compose(&r.inverse()).unwrap();
        assert!(prod.is_identity(1e-15));
    }
}
