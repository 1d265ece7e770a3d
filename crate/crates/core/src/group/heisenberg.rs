use nalgebra::{DMatrix, DVector};

use super::{check_dim, dim_from_phase_size, GroupElement};
use crate::error::{GroupError, Result};
use crate::linalg::{ensure_finite, ensure_len, ensure_square, max_abs_diff};

/// Element `Υ(f, v, r)` of the Weyl-Heisenberg group: force, velocity and
/// power. The packed translation `w = (f, v)` follows the `(p, q)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergElement {
    f: DVector<f64>,
    v: DVector<f64>,
    r: f64,
}

impl HeisenbergElement {
    pub fn new(f: DVector<f64>, v: DVector<f64>, r: f64) -> Result<Self> {
        if f.is_empty() {
            return Err(GroupError::ZeroDimension);
        }
        ensure_len(&v, f.len())?;
        ensure_finite(f.iter().chain(v.iter()).chain(std::iter::once(&r)), "heisenberg parameters")?;
        Ok(Self { f, v, r })
    }

    pub fn from_slices(f: &[f64], v: &[f64], r: f64) -> Result<Self> {
        Self::new(DVector::from_column_slice(f), DVector::from_column_slice(v), r)
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::ZeroDimension);
        }
        Ok(Self {
            f: DVector::zeros(n),
            v: DVector::zeros(n),
            r: 0.0,
        })
    }

    /// Builds from the packed `w = (f, v)` form.
    pub fn from_packed(w: &DVector<f64>, r: f64) -> Result<Self> {
        if !w.len().is_multiple_of(2) {
            return Err(GroupError::BadSize(w.len()));
        }
        let n = w.len() / 2;
        Self::new(w.rows(0, n).into_owned(), w.rows(n, n).into_owned(), r)
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

    /// `w = (f, v)`.
    pub fn packed(&self) -> DVector<f64> {
        let n = self.dim();
        let mut w = DVector::zeros(2 * n);
        w.rows_mut(0, n).copy_from(&self.f);
        w.rows_mut(n, n).copy_from(&self.v);
        w
    }

    /// `self · h · self⁻¹`.
    pub fn conjugate(&self, h: &HeisenbergElement) -> Result<Self> {
        self.compose(h)?.compose(&self.inverse())
    }

    /// Parses a `(2n+2)`-square matrix of the form `to_matrix` produces.
    pub fn from_matrix(m: &DMatrix<f64>, tol: f64) -> Result<Self> {
        let size = ensure_square(m)?;
        let n = dim_from_phase_size(size)?;
        let t = 2 * n + 1;
        let f = m.view((0, t), (n, 1)).column(0).into_owned();
        let v = m.view((n, t), (n, 1)).column(0).into_owned();
        let candidate = Self::new(f, v, m[(2 * n, t)])?;
        let deviation = max_abs_diff(&candidate.to_matrix(), m);
        if deviation > tol {
            return Err(GroupError::Structure {
                what: "not a Weyl-Heisenberg matrix",
                deviation,
            });
        }
        Ok(candidate)
    }
}

impl GroupElement for HeisenbergElement {
    fn dim(&self) -> usize {
        self.f.len()
    }

    /// `Υ(f″+f′, v″+v′, r″ + (r′ - f″·v′ + v″·f′))`.
    fn compose(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.dim(), rhs.dim())?;
        let twist = rhs.r - self.f.dot(&rhs.v) + self.v.dot(&rhs.f);
        Ok(Self {
            f: &self.f + &rhs.f,
            v: &self.v + &rhs.v,
            r: self.r + twist,
        })
    }

    /// `Υ(-f, -v, -r)`; the cross terms cancel identically.
    fn inverse(&self) -> Self {
        Self {
            f: -&self.f,
            v: -&self.v,
            r: -self.r,
        }
    }

    /// `[[I,0,0,f],[0,I,0,v],[ᵗv,-ᵗf,1,r],[0,0,0,1]]` in `(p, q, e, t)` order.
    ///
    /// The `(q-row, e-column)` block is zero; a nonzero entry there breaks the
    /// composition law.
    fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let size = 2 * n + 2;
        let (e, t) = (2 * n, 2 * n + 1);
        let mut m = DMatrix::identity(size, size);
        for i in 0..n {
            m[(i, t)] = self.f[i];
            m[(n + i, t)] = self.v[i];
            m[(e, i)] = self.v[i];
            m[(e, n + i)] = -self.f[i];
        }
        m[(e, t)] = self.r;
        m
    }
}
