//! Frame transformations on the extended phase space and Hamiltonian flows.
//!
//! Coordinates are ordered `(p, q, e, t)` everywhere: vectors, Jacobian rows
//! and columns, and trajectory records.

mod field;
mod frame;
mod integrate;

use nalgebra::DVector;

use crate::error::{GroupError, Result};
use crate::linalg::{ensure_finite, ensure_len};

pub use field::{
    gradient_consistency, numerical_gradient, BuiltinHamiltonian, FieldGradient, FnField,
    FreeParticle, HarmonicOscillator, LinearGenerator, ScalarField, UniformForce, ZeroField,
};
pub use frame::{
    generator_element, generators_to_transformation, jacobian, verify_hamilton_equations, CurveFn,
    FrameTransformation, HamiltonReport, SampleResiduals,
};
pub use integrate::{
    flow_jacobian_symplectic_check, integrate, transform_trajectory, FlowCheck,
};

/// Default central-difference step on unit-scale data.
pub const FD_STEP: f64 = 1e-5;

/// A point `z = (p, q, e, t)` of the extended phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub p: DVector<f64>,
    pub q: DVector<f64>,
    pub e: f64,
    pub t: f64,
}

impl PhasePoint {
    pub fn new(p: DVector<f64>, q: DVector<f64>, e: f64, t: f64) -> Result<Self> {
        if p.is_empty() {
            return Err(GroupError::ZeroDimension);
        }
        ensure_len(&q, p.len())?;
        ensure_finite(p.iter().chain(q.iter()).chain([e, t].iter()), "phase point")?;
        Ok(Self { p, q, e, t })
    }

    pub fn from_slices(p: &[f64], q: &[f64], e: f64, t: f64) -> Result<Self> {
        Self::new(DVector::from_column_slice(p), DVector::from_column_slice(q), e, t)
    }

    pub fn origin(n: usize) -> Result<Self> {
        Self::new(DVector::zeros(n), DVector::zeros(n), 0.0, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    /// Flattened `(p, q, e, t)`.
    pub fn to_vector(&self) -> DVector<f64> {
        let n = self.dim();
        let mut z = DVector::zeros(2 * n + 2);
        z.rows_mut(0, n).copy_from(&self.p);
        z.rows_mut(n, n).copy_from(&self.q);
        z[2 * n] = self.e;
        z[2 * n + 1] = self.t;
        z
    }

    pub fn from_vector(z: &DVector<f64>) -> Result<Self> {
        let n = crate::group::dim_from_phase_size(z.len())?;
        Self::new(
            z.rows(0, n).into_owned(),
            z.rows(n, n).into_owned(),
            z[2 * n],
            z[2 * n + 1],
        )
    }
}

/// Phase points on a uniform, strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    points: Vec<PhasePoint>,
    step: f64,
    hamiltonian: String,
}

impl Trajectory {
    pub fn new(points: Vec<PhasePoint>, step: f64, hamiltonian: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(GroupError::Precondition("trajectory has no points".into()));
        }
        if points.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(GroupError::Precondition("trajectory times must increase strictly".into()));
        }
        let n = points[0].dim();
        if points.iter().any(|z| z.dim() != n) {
            return Err(GroupError::Precondition("trajectory points differ in dimension".into()));
        }
        Ok(Self {
            points,
            step,
            hamiltonian: hamiltonian.into(),
        })
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn hamiltonian(&self) -> &str {
        &self.hamiltonian
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn last(&self) -> &PhasePoint {
        self.points.last().expect("nonempty by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_point_vector_layout() {
        let z = PhasePoint::from_slices(&[1.0, 2.0], &[3.0, 4.0], 5.0, 6.0).unwrap();
        assert_eq!(z.to_vector().as_slice(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(PhasePoint::from_vector(&z.to_vector()).unwrap(), z);
        assert!(PhasePoint::from_slices(&[1.0], &[1.0, 2.0], 0.0, 0.0).is_err());
        assert!(PhasePoint::from_slices(&[f64::INFINITY], &[1.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn trajectory_requires_increasing_time() {
        let a = PhasePoint::origin(1).unwrap();
        let mut b = a.clone();
        b.t = 0.0;
        assert!(Trajectory::new(vec![a.clone(), b], 0.1, "x").is_err());
        assert!(Trajectory::new(vec![], 0.1, "x").is_err());
    }
}
