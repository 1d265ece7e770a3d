use nalgebra::{DMatrix, DVector};

use super::{check_dim, GroupElement, Rotation, Sign};
use crate::error::Result;
use crate::linalg::{ensure_finite, ensure_len};

/// Element `Γ(ε, R, v)` of the extended Euclidean group acting on the
/// Newtonian space-time frame `(dq, dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanElement {
    epsilon: Sign,
    rot: Rotation,
    v: DVector<f64>,
}

impl EuclideanElement {
    pub fn new(epsilon: Sign, rot: Rotation, v: DVector<f64>) -> Result<Self> {
        ensure_len(&v, rot.dim())?;
        ensure_finite(v.iter(), "velocity")?;
        Ok(Self { epsilon, rot, v })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self {
            epsilon: Sign::Plus,
            rot: Rotation::identity(n)?,
            v: DVector::zeros(n),
        })
    }

    /// Pure velocity translation `Γ(1, I, v)`.
    pub fn boost(v: DVector<f64>) -> Result<Self> {
        let rot = Rotation::identity(v.len())?;
        Self::new(Sign::Plus, rot, v)
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rot
    }

    pub fn v(&self) -> &DVector<f64> {
        &self.v
    }
}

impl GroupElement for EuclideanElement {
    fn dim(&self) -> usize {
        self.rot.dim()
    }

    /// `(ε″ε′, R″R′, R″v′ + ε′v″)`.
    fn compose(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.dim(), rhs.dim())?;
        let v = self.rot.apply(&rhs.v) + &self.v * rhs.epsilon.value();
        Ok(Self {
            epsilon: self.epsilon * rhs.epsilon,
            rot: self.rot.compose(&rhs.rot)?,
            v,
        })
    }

    /// `(ε, R⁻¹, -εR⁻¹v)`.
    fn inverse(&self) -> Self {
        let rinv = self.rot.inverse();
        let v = rinv.apply(&self.v) * -self.epsilon.value();
        Self {
            epsilon: self.epsilon,
            rot: rinv,
            v,
        }
    }

    /// `(n+1) x (n+1)` matrix `[[R, v], [0, ε]]` in the `(q, t)` basis.
    fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(self.rot.matrix());
        m.view_mut((0, n), (n, 1)).copy_from(&self.v);
        m[(n, n)] = self.epsilon.value();
        m
    }
}
