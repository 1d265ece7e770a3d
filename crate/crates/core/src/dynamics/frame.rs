use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::field::{LinearGenerator, ScalarField, ZeroField};
use super::{PhasePoint, FD_STEP};
use crate::error::{GroupError, Result};
use crate::group::{GroupElement, HeisenbergElement};
use crate::linalg::ensure_len;

pub type CurveFn = Arc<dyn Fn(f64) -> DVector<f64> + Send + Sync>;

/// `z̃ = (p + φ_p(t), q + φ_q(t), e + H(p, q, t), t)`.
#[derive(Clone)]
pub struct FrameTransformation {
    n: usize,
    phi_p: CurveFn,
    phi_q: CurveFn,
    hamiltonian: Arc<dyn ScalarField>,
}

impl fmt::Debug for FrameTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameTransformation")
            .field("n", &self.n)
            .field("hamiltonian", &self.hamiltonian.name())
            .finish()
    }
}

impl FrameTransformation {
    pub fn new(n: usize, phi_p: CurveFn, phi_q: CurveFn, hamiltonian: Arc<dyn ScalarField>) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::ZeroDimension);
        }
        if hamiltonian.dim() != n {
            return Err(GroupError::DimensionMismatch {
                expected: n,
                found: hamiltonian.dim(),
            });
        }
        Ok(Self {
            n,
            phi_p,
            phi_q,
            hamiltonian,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let zero: CurveFn = Arc::new(move |_| DVector::zeros(n));
        Self::new(n, zero.clone(), zero, Arc::new(ZeroField { n }))
    }

    /// `φ_p(t) = f·t`, `φ_q(t) = v·t`, `H = v·p - f·q + r·t`.
    pub fn from_generators(v: &DVector<f64>, f: &DVector<f64>, r: f64) -> Result<Self> {
        ensure_len(f, v.len())?;
        let n = v.len();
        let (fv, vv) = (f.clone(), v.clone());
        Self::new(
            n,
            Arc::new(move |t| &fv * t),
            Arc::new(move |t| &vv * t),
            Arc::new(LinearGenerator {
                v: v.clone(),
                f: f.clone(),
                r,
            }),
        )
    }

    pub fn from_heisenberg(h: &HeisenbergElement) -> Result<Self> {
        Self::from_generators(h.v(), h.f(), h.r())
    }

    /// Same curves, different field.
    pub fn with_hamiltonian(&self, hamiltonian: Arc<dyn ScalarField>) -> Result<Self> {
        Self::new(self.n, self.phi_p.clone(), self.phi_q.clone(), hamiltonian)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn hamiltonian(&self) -> &dyn ScalarField {
        self.hamiltonian.as_ref()
    }

    pub fn apply(&self, z: &PhasePoint) -> Result<PhasePoint> {
        if z.dim() != self.n {
            return Err(GroupError::DimensionMismatch {
                expected: self.n,
                found: z.dim(),
            });
        }
        let p = &z.p + (self.phi_p)(z.t);
        let q = &z.q + (self.phi_q)(z.t);
        let e = z.e + self.hamiltonian.eval(&z.p, &z.q, z.t);
        PhasePoint::new(p, q, e, z.t)
    }

    fn apply_vector(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.apply(&PhasePoint::from_vector(z)?)?.to_vector())
    }
}

/// Construction from constant (velocity, force, power) generators.
pub fn generators_to_transformation(v: &DVector<f64>, f: &DVector<f64>, r: f64) -> Result<FrameTransformation> {
    FrameTransformation::from_generators(v, f, r)
}

/// Central-difference Jacobian `∂z̃^α/∂z^β` in `(p, q, e, t)` order.
pub fn jacobian(phi: &FrameTransformation, z: &PhasePoint, h: f64) -> Result<DMatrix<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(GroupError::Precondition(format!("step must be positive, got {h}")));
    }
    let base = z.to_vector();
    let size = base.len();
    let mut jac = DMatrix::zeros(size, size);
    for j in 0..size {
        let (mut zp, mut zm) = (base.clone(), base.clone());
        zp[j] += h;
        zm[j] -= h;
        let step = zp[j] - zm[j];
        let col = (phi.apply_vector(&zp)? - phi.apply_vector(&zm)?) / step;
        if col.iter().any(|x| !x.is_finite()) {
            return Err(GroupError::NonFinite("jacobian column"));
        }
        jac.set_column(j, &col);
    }
    Ok(jac)
}

/// Residuals of `dφ_q/dt = ∂H/∂p`, `dφ_p/dt = -∂H/∂q`, `∂H/∂t = r` at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleResiduals {
    pub velocity: f64,
    pub force: f64,
    pub power: f64,
}

impl SampleResiduals {
    pub fn max(&self) -> f64 {
        self.velocity.max(self.force).max(self.power)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HamiltonReport {
    pub samples: Vec<SampleResiduals>,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Compares the time column of the numerical Jacobian (the rates of the frame
/// curves and of `ẽ`) against the field's own gradient at every sample.
pub fn verify_hamilton_equations(
    phi: &FrameTransformation,
    samples: &[PhasePoint],
    tol: f64,
) -> Result<HamiltonReport> {
    if samples.is_empty() {
        return Err(GroupError::Precondition("no sample points".into()));
    }
    let n = phi.dim();
    let (e, t) = (2 * n, 2 * n + 1);
    let mut out = Vec::with_capacity(samples.len());
    for z in samples {
        let jac = jacobian(phi, z, FD_STEP)?;
        let grad = phi.hamiltonian().gradient(&z.p, &z.q, z.t);
        let mut velocity = 0.0_f64;
        let mut force = 0.0_f64;
        for i in 0..n {
            velocity = velocity.max((jac[(n + i, t)] - grad.dp[i]).abs());
            force = force.max((jac[(i, t)] + grad.dq[i]).abs());
        }
        let power = (grad.dt - jac[(e, t)]).abs();
        out.push(SampleResiduals { velocity, force, power });
    }
    let max_residual = out.iter().map(SampleResiduals::max).fold(0.0, f64::max);
    Ok(HamiltonReport {
        samples: out,
        max_residual,
        tol,
        passed: max_residual <= tol,
    })
}

/// Matrix of the Heisenberg element a constant-generator transformation
/// realizes as its Jacobian.
pub fn generator_element(v: &DVector<f64>, f: &DVector<f64>, r: f64) -> Result<DMatrix<f64>> {
    Ok(HeisenbergElement::new(f.clone(), v.clone(), r)?.to_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::FnField;
    use crate::group::random;
    use crate::linalg::max_abs_diff;

    fn v1(x: f64) -> DVector<f64> {
        DVector::from_vec(vec![x])
    }

    #[test]
    fn zero_generators_are_identity() {
        let phi = FrameTransformation::from_generators(&v1(0.0), &v1(0.0), 0.0).unwrap();
        let z = PhasePoint::from_slices(&[0.3], &[-1.2], 0.7, 2.0).unwrap();
        assert_eq!(phi.apply(&z).unwrap(), z);
        assert_eq!(phi.hamiltonian().eval(&z.p, &z.q, z.t), 0.0);
    }

    #[test]
    fn boost_moves_position_linearly() {
        let phi = FrameTransformation::from_generators(&v1(3.0), &v1(0.0), 0.0).unwrap();
        let z = PhasePoint::from_slices(&[0.5], &[1.0], 0.0, 2.0).unwrap();
        let w = phi.apply(&z).unwrap();
        assert_eq!(w.q[0], 7.0);
        assert_eq!(w.p[0], 0.5);
        assert_eq!(w.t, 2.0);
    }

    #[test]
    fn identity_jacobian() {
        let phi = FrameTransformation::identity(2).unwrap();
        let z = PhasePoint::from_slices(&[0.1, -0.4], &[2.0, 0.3], 1.5, -0.25).unwrap();
        let j = jacobian(&phi, &z, 1e-5).unwrap();
        assert!(max_abs_diff(&j, &DMatrix::identity(6, 6)) <= 1e-9);
        assert!(jacobian(&phi, &z, 0.0).is_err());
    }

    #[test]
    fn pure_boost_jacobian_block() {
        let phi = FrameTransformation::from_generators(&v1(2.5), &v1(0.0), 0.0).unwrap();
        let z = PhasePoint::from_slices(&[0.2], &[0.1], 0.0, 0.4).unwrap();
        let j = jacobian(&phi, &z, 1e-5).unwrap();
        // (q, t) slot carries v; the energy row carries ∂H/∂p = v.
        assert!((j[(1, 3)] - 2.5).abs() < 1e-9);
        assert!((j[(2, 0)] - 2.5).abs() < 1e-9);
        for i in 0..4 {
            for k in 0..i {
                if (i, k) != (2, 0) {
                    assert!(j[(i, k)].abs() < 1e-9, "({i},{k}) = {}", j[(i, k)]);
                }
            }
        }
    }

    #[test]
    fn jacobian_matches_group_realization() {
        let mut rng = random::rng_from_seed(21);
        for n in 1..=3 {
            let (v, f, r) = (random::vector(n, &mut rng), random::vector(n, &mut rng), random::unit(&mut rng));
            let phi = FrameTransformation::from_generators(&v, &f, r).unwrap();
            let expected = generator_element(&v, &f, r).unwrap();
            for _ in 0..10 {
                let z = PhasePoint::new(
                    random::vector(n, &mut rng),
                    random::vector(n, &mut rng),
                    random::unit(&mut rng),
                    random::unit(&mut rng),
                )
                .unwrap();
                assert!(max_abs_diff(&jacobian(&phi, &z, 1e-5).unwrap(), &expected) <= 1e-6);
            }
        }
    }

    #[test]
    fn hamilton_equations_hold_for_generators() {
        let phi = FrameTransformation::from_generators(&v1(0.4), &v1(-0.9), 0.3).unwrap();
        let samples = vec![PhasePoint::from_slices(&[0.2], &[1.0], 0.0, 0.5).unwrap()];
        let report = verify_hamilton_equations(&phi, &samples, 1e-6).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(verify_hamilton_equations(&phi, &[], 1e-6).is_err());
    }

    #[test]
    fn mismatched_field_fails_force_check() {
        let (v, f, r) = (0.4, -0.9, 0.3);
        let phi = FrameTransformation::from_generators(&v1(v), &v1(f), r).unwrap();
        let wrong = FnField::new(1, "generator + q²", move |p: &DVector<f64>, q: &DVector<f64>, t| {
            v * p[0] - f * q[0] + r * t + q[0] * q[0]
        });
        let phi = phi.with_hamiltonian(Arc::new(wrong)).unwrap();
        let z = PhasePoint::from_slices(&[0.0], &[1.0], 0.0, 0.0).unwrap();
        let report = verify_hamilton_equations(&phi, &[z], 1e-6).unwrap();
        assert!(!report.passed);
        assert!((report.samples[0].force - 2.0).abs() < 1e-6);
        assert!(report.samples[0].velocity < 1e-6);
    }

    #[test]
    fn identity_transformation_has_zero_residuals() {
        let phi = FrameTransformation::identity(2).unwrap();
        let z = PhasePoint::from_slices(&[0.1, 0.2], &[0.3, 0.4], 0.5, 0.6).unwrap();
        let report = verify_hamilton_equations(&phi, &[z], 0.0).unwrap();
        assert_eq!(report.max_residual, 0.0);
        assert!(report.passed);
    }
}
