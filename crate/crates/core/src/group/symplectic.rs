use nalgebra::{DMatrix, DVector};

use super::{check_dim, GroupElement, HeisenbergElement, Sign, MEMBERSHIP_TOL};
use crate::error::{GroupError, Result};
use crate::linalg::{congruence_residual, ensure_finite, ensure_len, ensure_square, symplectic_core};

/// Element `A` of Sp(2n) acting on `(p, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticElement {
    a: DMatrix<f64>,
}

impl SymplecticElement {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(a, MEMBERSHIP_TOL)
    }

    pub fn with_tolerance(a: DMatrix<f64>, tol: f64) -> Result<Self> {
        let size = ensure_square(&a)?;
        if size == 0 || size % 2 != 0 {
            return Err(GroupError::BadSize(size));
        }
        ensure_finite(a.iter(), "symplectic matrix")?;
        let residual = congruence_residual(&a, &symplectic_core(size / 2));
        if residual > tol {
            return Err(GroupError::NotSymplectic { residual });
        }
        Ok(Self { a })
    }

    pub(crate) fn from_matrix_unchecked(a: DMatrix<f64>) -> Self {
        Self { a }
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::ZeroDimension);
        }
        Ok(Self {
            a: DMatrix::identity(2 * n, 2 * n),
        })
    }

    /// `diag(R, R)` for an `n x n` matrix `R`.
    pub fn block_diagonal(r: &DMatrix<f64>) -> Self {
        let n = r.nrows();
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        a.view_mut((0, 0), (n, n)).copy_from(r);
        a.view_mut((n, n), (n, n)).copy_from(r);
        Self { a }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// `n x n` block `A_{row,col}` with `row, col ∈ {1, 2}`; block 1 is the
    /// momentum slot, block 2 the position slot.
    pub fn block(&self, row: usize, col: usize) -> DMatrix<f64> {
        assert!((1..=2).contains(&row) && (1..=2).contains(&col), "block index out of range");
        let n = self.dim();
        self.a.view(((row - 1) * n, (col - 1) * n), (n, n)).into_owned()
    }

    pub fn residual(&self) -> f64 {
        congruence_residual(&self.a, &symplectic_core(self.dim()))
    }

    /// `A⁻¹ = -ζ°·ᵗA·ζ°`, exact for symplectic `A`.
    pub fn inverse(&self) -> Self {
        let z = symplectic_core(self.dim());
        Self {
            a: -(&z * self.a.transpose() * &z),
        }
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Self { a: &self.a * &rhs.a })
    }
}

/// Element `Φ(ε, A, w, r)` of `D₂ ⋉ Sp(2n) ⋉ H(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HSpElement {
    epsilon: Sign,
    a: SymplecticElement,
    w: DVector<f64>,
    r: f64,
}

impl HSpElement {
    pub fn new(epsilon: Sign, a: SymplecticElement, w: DVector<f64>, r: f64) -> Result<Self> {
        ensure_len(&w, 2 * a.dim())?;
        ensure_finite(w.iter().chain(std::iter::once(&r)), "hsp translation")?;
        Ok(Self { epsilon, a, w, r })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self {
            epsilon: Sign::Plus,
            a: SymplecticElement::identity(n)?,
            w: DVector::zeros(2 * n),
            r: 0.0,
        })
    }

    /// Embeds `Υ(w, r)` as `Φ(1, I, w, r)`.
    pub fn from_heisenberg(h: &HeisenbergElement) -> Self {
        let n = h.dim();
        Self {
            epsilon: Sign::Plus,
            a: SymplecticElement::from_matrix_unchecked(DMatrix::identity(2 * n, 2 * n)),
            w: h.packed(),
            r: h.r(),
        }
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn symplectic(&self) -> &SymplecticElement {
        &self.a
    }

    pub fn w(&self) -> &DVector<f64> {
        &self.w
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `self · Υ(u, s) · self⁻¹ = Υ(εA·u, s - ᵗw·ζ°·(A·u) + ᵗ(A·u)·ζ°·w)`.
    ///
    /// The two cross terms are equal, so the power shift is `-2·ᵗw·ζ°·A·u`.
    pub fn conjugate_heisenberg(&self, h: &HeisenbergElement) -> Result<HeisenbergElement> {
        check_dim(self.dim(), h.dim())?;
        let z = symplectic_core(self.dim());
        let au = self.a.matrix() * h.packed();
        let r = h.r() - self.w.dot(&(&z * &au)) + au.dot(&(&z * &self.w));
        HeisenbergElement::from_packed(&(au * self.epsilon.value()), r)
    }
}

impl GroupElement for HSpElement {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `ε = ε″ε′`, `A = A″A′`, `w = ε′w″ + A″w′`,
    /// `r = ε″r′ + ε′r″ - ε″·ᵗw″·ζ°·A″·w′`.
    fn compose(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.dim(), rhs.dim())?;
        let z = symplectic_core(self.dim());
        let aw = self.a.matrix() * &rhs.w;
        let (e2, e1) = (self.epsilon.value(), rhs.epsilon.value());
        let r = e2 * rhs.r + e1 * self.r - e2 * self.w.dot(&(&z * &aw));
        Ok(Self {
            epsilon: self.epsilon * rhs.epsilon,
            a: self.a.compose(&rhs.a)?,
            w: &self.w * e1 + aw,
            r,
        })
    }

    /// `(ε, A⁻¹, -εA⁻¹w, -r)`.
    fn inverse(&self) -> Self {
        let ainv = self.a.inverse();
        let w = ainv.matrix() * &self.w * -self.epsilon.value();
        Self {
            epsilon: self.epsilon,
            a: ainv,
            w,
            r: -self.r,
        }
    }

    /// `[[A, 0, w], [-ε·ᵗw·ζ°·A, ε, r], [0, 0, ε]]` in `(p, q, e, t)` order.
    fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let (e, t) = (2 * n, 2 * n + 1);
        let eps = self.epsilon.value();
        let mut m = DMatrix::zeros(2 * n + 2, 2 * n + 2);
        m.view_mut((0, 0), (2 * n, 2 * n)).copy_from(self.a.matrix());
        m.view_mut((0, t), (2 * n, 1)).copy_from(&self.w);
        let row = (self.w.transpose() * symplectic_core(n) * self.a.matrix()) * -eps;
        m.view_mut((e, 0), (1, 2 * n)).copy_from(&row);
        m[(e, e)] = eps;
        m[(e, t)] = self.r;
        m[(t, t)] = eps;
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn rejects_non_symplectic() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(matches!(
            SymplecticElement::new(a),
            Err(GroupError::NotSymplectic { .. })
        ));
        assert!(SymplecticElement::new(DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn shear_is_symplectic_and_inverts() {
        let a = SymplecticElement::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])).unwrap();
        let prod = a.compose(&a.inverse()).unwrap();
        assert_eq!(prod.matrix(), &DMatrix::identity(2, 2));
        assert_eq!(a.block(1, 2)[(0, 0)], 1.0);
    }

    #[test]
    fn translation_example_n1() {
        let id = SymplecticElement::identity(1).unwrap();
        let p = HSpElement::new(Sign::Plus, id, DVector::from_vec(vec![1.0, 0.0]), 0.0).unwrap();
        let c = p.compose(&p).unwrap();
        assert_eq!(c.w().as_slice(), &[2.0, 0.0]);
        assert_eq!(c.r(), 0.0);
        assert!(max_abs_diff(&c.to_matrix(), &(p.to_matrix() * p.to_matrix())) < 1e-15);
    }

    #[test]
    fn pure_linear_parts_compose_blockwise() {
        let a1 = SymplecticElement::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])).unwrap();
        let a2 = SymplecticElement::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).unwrap();
        let p2 = HSpElement::new(Sign::Minus, a2.clone(), DVector::zeros(2), 0.0).unwrap();
        let p1 = HSpElement::new(Sign::Plus, a1.clone(), DVector::zeros(2), 0.0).unwrap();
        let c = p2.compose(&p1).unwrap();
        assert_eq!(c.epsilon(), Sign::Minus);
        assert_eq!(c.symplectic(), &a2.compose(&a1).unwrap());
        assert_eq!(c.w().as_slice(), &[0.0, 0.0]);
        assert_eq!(c.r(), 0.0);
    }

    #[test]
    fn conjugation_by_velocity_shifts_power() {
        // conjugate Υ(f=1, 0, 0) by Υ(0, v′=2, 0): power becomes +2·f·v′ = 4.
        let g = HSpElement::from_heisenberg(&HeisenbergElement::from_slices(&[0.0], &[2.0], 0.0).unwrap());
        let h = HeisenbergElement::from_slices(&[1.0], &[0.0], 0.0).unwrap();
        let c = g.conjugate_heisenberg(&h).unwrap();
        assert_eq!(c, HeisenbergElement::from_slices(&[1.0], &[0.0], 4.0).unwrap());
    }
}
