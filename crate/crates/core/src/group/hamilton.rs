use nalgebra::{DMatrix, DVector};

use super::{
    check_dim, dim_from_phase_size, EuclideanElement, GroupElement, HSpElement, HeisenbergElement,
    Rotation, Sign, SymplecticElement,
};
use crate::error::{GroupError, Result};
use crate::linalg::{ensure_finite, ensure_len, ensure_square, max_abs_diff, max_abs_vec};

/// Element `Φ(ε, R, f, v, r)` of the extended Hamilton group
/// `D₂ ⋉ O(n) ⋉ H(n)`.
///
/// This is the special case of [`HSpElement`] with `A = diag(R, R)` and
/// `w = (f, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonElement {
    epsilon: Sign,
    rot: Rotation,
    f: DVector<f64>,
    v: DVector<f64>,
    r: f64,
}

impl HamiltonElement {
    pub fn new(epsilon: Sign, rot: Rotation, f: DVector<f64>, v: DVector<f64>, r: f64) -> Result<Self> {
        ensure_len(&f, rot.dim())?;
        ensure_len(&v, rot.dim())?;
        ensure_finite(f.iter().chain(v.iter()).chain(std::iter::once(&r)), "hamilton parameters")?;
        Ok(Self { epsilon, rot, f, v, r })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self {
            epsilon: Sign::Plus,
            rot: Rotation::identity(n)?,
            f: DVector::zeros(n),
            v: DVector::zeros(n),
            r: 0.0,
        })
    }

    pub fn from_heisenberg(h: &HeisenbergElement) -> Self {
        let n = h.dim();
        Self {
            epsilon: Sign::Plus,
            rot: Rotation::from_matrix_unchecked(DMatrix::identity(n, n)),
            f: h.f().clone(),
            v: h.v().clone(),
            r: h.r(),
        }
    }

    /// Inertial embedding `Γ(ε, R, v) ↦ Φ(ε, R, 0, v, 0)`.
    pub fn from_euclidean(e: &EuclideanElement) -> Self {
        Self {
            epsilon: e.epsilon(),
            rot: e.rotation().clone(),
            f: DVector::zeros(e.dim()),
            v: e.v().clone(),
            r: 0.0,
        }
    }

    /// Inverse of [`from_euclidean`](Self::from_euclidean); requires
    /// `f = 0` and `r = 0` within `1e-12`.
    pub fn to_euclidean(&self) -> Result<EuclideanElement> {
        const ZERO_TOL: f64 = 1e-12;
        if max_abs_vec(&self.f) > ZERO_TOL || self.r.abs() > ZERO_TOL {
            return Err(GroupError::Precondition(format!(
                "element is not inertial (|f| = {:e}, |r| = {:e})",
                max_abs_vec(&self.f),
                self.r.abs()
            )));
        }
        EuclideanElement::new(self.epsilon, self.rot.clone(), self.v.clone())
    }

    pub fn to_hsp(&self) -> HSpElement {
        let a = SymplecticElement::block_diagonal(self.rot.matrix());
        HSpElement::new(self.epsilon, a, self.packed(), self.r).expect("dimensions agree by construction")
    }

    /// The `(f, v, r)` parameters as a Weyl-Heisenberg element, ignoring
    /// `ε` and `R`.
    pub fn heisenberg_part(&self) -> HeisenbergElement {
        HeisenbergElement::new(self.f.clone(), self.v.clone(), self.r).expect("validated at construction")
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rot
    }

    pub fn f(&self) -> &DVector<f64> {
        &self.f
    }

    pub fn v(&self) -> &DVector<f64> {
        &self.v
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn packed(&self) -> DVector<f64> {
        let n = self.dim();
        let mut w = DVector::zeros(2 * n);
        w.rows_mut(0, n).copy_from(&self.f);
        w.rows_mut(n, n).copy_from(&self.v);
        w
    }

    /// Recovers the parameters from a `(2n+2)`-square matrix and checks that
    /// re-realizing them reproduces `m` within `tol`.
    pub fn from_matrix(m: &DMatrix<f64>, tol: f64) -> Result<Self> {
        let size = ensure_square(m)?;
        let n = dim_from_phase_size(size)?;
        ensure_finite(m.iter(), "matrix")?;
        let (e, t) = (2 * n, 2 * n + 1);
        let epsilon = Sign::nearest(m[(t, t)], tol).ok_or(GroupError::Structure {
            what: "time-time entry is not ±1",
            deviation: (m[(t, t)].abs() - 1.0).abs(),
        })?;
        let rot = Rotation::with_tolerance(m.view((n, n), (n, n)).into_owned(), tol)?;
        let f = m.view((0, t), (n, 1)).column(0).into_owned();
        let v = m.view((n, t), (n, 1)).column(0).into_owned();
        let candidate = Self::new(epsilon, rot, f, v, m[(e, t)])?;
        let deviation = max_abs_diff(&candidate.to_matrix(), m);
        if deviation > tol {
            return Err(GroupError::Structure {
                what: "not a Hamilton group matrix",
                deviation,
            });
        }
        Ok(candidate)
    }
}

impl GroupElement for HamiltonElement {
    fn dim(&self) -> usize {
        self.rot.dim()
    }

    /// `ε = ε′ε″`, `R = R″R′`, `f = ε′f″ + R″f′`, `v = ε′v″ + R″v′`,
    /// `r = ε′r″ + ε″(r′ - f″·R″v′ + v″·R″f′)`.
    fn compose(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.dim(), rhs.dim())?;
        let (e2, e1) = (self.epsilon.value(), rhs.epsilon.value());
        let rf = self.rot.apply(&rhs.f);
        let rv = self.rot.apply(&rhs.v);
        let twist = rhs.r - self.f.dot(&rv) + self.v.dot(&rf);
        Ok(Self {
            epsilon: self.epsilon * rhs.epsilon,
            rot: self.rot.compose(&rhs.rot)?,
            f: &self.f * e1 + rf,
            v: &self.v * e1 + rv,
            r: e1 * self.r + e2 * twist,
        })
    }

    /// `(ε, R⁻¹, -εR⁻¹f, -εR⁻¹v, -r)`.
    fn inverse(&self) -> Self {
        let eps = self.epsilon.value();
        let rinv = self.rot.inverse();
        Self {
            epsilon: self.epsilon,
            f: rinv.apply(&self.f) * -eps,
            v: rinv.apply(&self.v) * -eps,
            rot: rinv,
            r: -self.r,
        }
    }

    /// Rows `[R,0,0,f | 0,R,0,v | ε·ᵗv·R, -ε·ᵗf·R, ε, r | 0,0,0,ε]`.
    ///
    /// The energy row carries the `ε` and `R` factors required for matrix
    /// multiplication to reproduce [`compose`](GroupElement::compose); the
    /// shorthand `(v, -f, ε, r)` only agrees at `ε = 1`, `R = I`.
    fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let (e, t) = (2 * n, 2 * n + 1);
        let eps = self.epsilon.value();
        let r = self.rot.matrix();
        let mut m = DMatrix::zeros(2 * n + 2, 2 * n + 2);
        m.view_mut((0, 0), (n, n)).copy_from(r);
        m.view_mut((n, n), (n, n)).copy_from(r);
        m.view_mut((0, t), (n, 1)).copy_from(&self.f);
        m.view_mut((n, t), (n, 1)).copy_from(&self.v);
        let vr = self.v.transpose() * r * eps;
        let fr = self.f.transpose() * r * -eps;
        m.view_mut((e, 0), (1, n)).copy_from(&vr);
        m.view_mut((e, n), (1, n)).copy_from(&fr);
        m[(e, e)] = eps;
        m[(e, t)] = self.r;
        m[(t, t)] = eps;
        m
    }
}
