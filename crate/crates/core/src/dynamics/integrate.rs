use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::field::ScalarField;
use super::frame::FrameTransformation;
use super::{PhasePoint, Trajectory, FD_STEP};
use crate::error::{GroupError, Result};
use crate::linalg::{congruence_residual, symplectic_core};

/// `ṗ = -∂H/∂q`, `q̇ = ∂H/∂p`, `ė = ∂H/∂t`, `ṫ = 1` on the flattened state.
fn rate(h: &dyn ScalarField, y: &DVector<f64>, n: usize) -> DVector<f64> {
    let p = y.rows(0, n).into_owned();
    let q = y.rows(n, n).into_owned();
    let g = h.gradient(&p, &q, y[2 * n + 1]);
    let mut dy = DVector::zeros(2 * n + 2);
    dy.rows_mut(0, n).copy_from(&(-g.dq));
    dy.rows_mut(n, n).copy_from(&g.dp);
    dy[2 * n] = g.dt;
    dy[2 * n + 1] = 1.0;
    dy
}

/// Classical fourth-order Runge-Kutta with `steps` uniform steps from `z0.t`
/// to `t1`. The returned trajectory holds `steps + 1` points.
pub fn integrate(h: &dyn ScalarField, z0: &PhasePoint, t1: f64, steps: usize) -> Result<Trajectory> {
    let n = z0.dim();
    if h.dim() != n {
        return Err(GroupError::DimensionMismatch {
            expected: h.dim(),
            found: n,
        });
    }
    if steps == 0 {
        return Err(GroupError::Precondition("steps must be at least 1".into()));
    }
    if t1.is_nan() || t1 <= z0.t {
        return Err(GroupError::Precondition(format!(
            "end time {t1} must exceed start time {}",
            z0.t
        )));
    }
    let t0 = z0.t;
    let dt = (t1 - t0) / steps as f64;
    let mut y = z0.to_vector();
    let mut points = Vec::with_capacity(steps + 1);
    points.push(z0.clone());
    for k in 1..=steps {
        let k1 = rate(h, &y, n);
        let k2 = rate(h, &(&y + &k1 * (0.5 * dt)), n);
        let k3 = rate(h, &(&y + &k2 * (0.5 * dt)), n);
        let k4 = rate(h, &(&y + &k3 * dt), n);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        // ṫ = 1 exactly; pin the grid instead of accumulating it.
        y[2 * n + 1] = if k == steps { t1 } else { t0 + k as f64 * dt };
        if y.iter().any(|x| !x.is_finite()) {
            return Err(GroupError::NonFinite("integrator state"));
        }
        points.push(PhasePoint::from_vector(&y)?);
    }
    Trajectory::new(points, dt, h.name())
}

/// Pointwise image of a trajectory; the time grid is untouched.
pub fn transform_trajectory(phi: &FrameTransformation, traj: &Trajectory) -> Result<Trajectory> {
    if phi.dim() != traj.dim() {
        return Err(GroupError::DimensionMismatch {
            expected: phi.dim(),
            found: traj.dim(),
        });
    }
    let points = traj
        .points()
        .iter()
        .map(|z| phi.apply(z))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(points, traj.step(), traj.hamiltonian())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowCheck {
    /// Jacobian of the time-`t1` flow on `(p, q)`.
    #[serde(skip)]
    pub jacobian: DMatrix<f64>,
    pub residual: f64,
    pub passed: bool,
}

/// Finite-difference Jacobian of the `(p, q)` flow map and its symplectic
/// residual `max |ᵗJ·ζ°·J - ζ°|`.
pub fn flow_jacobian_symplectic_check(
    h: &dyn ScalarField,
    z0: &PhasePoint,
    t1: f64,
    steps: usize,
    tol: f64,
) -> Result<FlowCheck> {
    let n = z0.dim();
    let base = z0.to_vector();
    let mut jac = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..2 * n {
        let (mut zp, mut zm) = (base.clone(), base.clone());
        zp[j] += FD_STEP;
        zm[j] -= FD_STEP;
        let step = zp[j] - zm[j];
        let end_p = integrate(h, &PhasePoint::from_vector(&zp)?, t1, steps)?.last().to_vector();
        let end_m = integrate(h, &PhasePoint::from_vector(&zm)?, t1, steps)?.last().to_vector();
        let col = (end_p.rows(0, 2 * n) - end_m.rows(0, 2 * n)) / step;
        jac.set_column(j, &col);
    }
    let residual = congruence_residual(&jac, &symplectic_core(n));
    Ok(FlowCheck {
        jacobian: jac,
        residual,
        passed: residual <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{FreeParticle, HarmonicOscillator, UniformForce, ZeroField};

    #[test]
    fn free_particle_endpoint() {
        let z0 = PhasePoint::from_slices(&[1.0], &[0.0], 0.5, 0.0).unwrap();
        let traj = integrate(&FreeParticle { n: 1 }, &z0, 2.0, 2000).unwrap();
        let end = traj.last();
        assert!((end.q[0] - 2.0).abs() <= 1e-10);
        assert!((end.p[0] - 1.0).abs() <= 1e-10);
        assert_eq!(end.t, 2.0);
        assert_eq!(traj.points().len(), 2001);
        assert!(traj.points().iter().all(|z| z.e == 0.5));
    }

    #[test]
    fn uniform_force_endpoint() {
        let h = UniformForce {
            f: DVector::from_vec(vec![1.0]),
        };
        let traj = integrate(&h, &PhasePoint::origin(1).unwrap(), 1.0, 100).unwrap();
        assert!((traj.last().p[0] - 1.0).abs() <= 1e-8);
        assert!((traj.last().q[0] - 0.5).abs() <= 1e-8);
    }

    #[test]
    fn integrate_preconditions() {
        let z0 = PhasePoint::origin(1).unwrap();
        let h = FreeParticle { n: 1 };
        assert!(integrate(&h, &z0, 1.0, 0).is_err());
        assert!(integrate(&h, &z0, 0.0, 10).is_err());
        assert!(integrate(&FreeParticle { n: 2 }, &z0, 1.0, 10).is_err());
    }

    #[test]
    fn zero_field_flow_is_identity() {
        let z0 = PhasePoint::from_slices(&[0.25], &[-0.5], 0.0, 0.0).unwrap();
        let check = flow_jacobian_symplectic_check(&ZeroField { n: 1 }, &z0, 1.0, 10, 1e-12).unwrap();
        assert_eq!(check.jacobian, DMatrix::identity(2, 2));
        assert_eq!(check.residual, 0.0);
    }

    #[test]
    fn free_flow_is_shear() {
        let z0 = PhasePoint::from_slices(&[0.3], &[0.1], 0.0, 0.0).unwrap();
        let check = flow_jacobian_symplectic_check(&FreeParticle { n: 1 }, &z0, 1.0, 100, 1e-8).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        assert!(crate::linalg::max_abs_diff(&check.jacobian, &expected) <= 1e-8);
        assert!(check.passed);
    }

    #[test]
    fn harmonic_quarter_period_is_rotation() {
        let z0 = PhasePoint::from_slices(&[0.2], &[0.7], 0.0, 0.0).unwrap();
        let check = flow_jacobian_symplectic_check(
            &HarmonicOscillator { n: 1 },
            &z0,
            std::f64::consts::FRAC_PI_2,
            1000,
            1e-6,
        )
        .unwrap();
        // p(t) = p₀cos t - q₀sin t, q(t) = q₀cos t + p₀sin t.
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(crate::linalg::max_abs_diff(&check.jacobian, &expected) <= 1e-6);
        assert!(check.passed);
    }

    #[test]
    fn transform_keeps_time_grid() {
        let z0 = PhasePoint::origin(1).unwrap();
        let traj = integrate(&FreeParticle { n: 1 }, &z0, 1.0, 8).unwrap();
        let phi = FrameTransformation::from_generators(
            &DVector::from_vec(vec![3.0]),
            &DVector::from_vec(vec![0.0]),
            0.0,
        )
        .unwrap();
        let moved = transform_trajectory(&phi, &traj).unwrap();
        for (a, b) in traj.points().iter().zip(moved.points()) {
            assert_eq!(a.t, b.t);
            assert_eq!(b.q[0], 3.0 * a.t);
        }
        let wrong = FrameTransformation::identity(2).unwrap();
        assert!(transform_trajectory(&wrong, &traj).is_err());
    }
}
