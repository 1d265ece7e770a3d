//! Small dense helpers shared by the group, invariance and dynamics code.

use nalgebra::{DMatrix, DVector};

use crate::error::{GroupError, Result};

/// Largest absolute entry; zero for empty matrices.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_vec(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// The 2n x 2n symplectic core `[[0, I], [-I, 0]]` in (p, q) order.
pub fn symplectic_core(n: usize) -> DMatrix<f64> {
    let mut z = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        z[(i, n + i)] = 1.0;
        z[(n + i, i)] = -1.0;
    }
    z
}

/// Residual `max |tA·Z·A - Z|` of the congruence test against `form`.
pub fn congruence_residual(m: &DMatrix<f64>, form: &DMatrix<f64>) -> f64 {
    let lhs = m.transpose() * form * m;
    max_abs_diff(&lhs, form)
}

/// `max |tR·R - I|`.
pub fn orthogonality_residual(r: &DMatrix<f64>) -> f64 {
    let n = r.nrows();
    let g = r.transpose() * r;
    max_abs_diff(&g, &DMatrix::identity(n, n))
}

pub fn ensure_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(GroupError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_len(v: &DVector<f64>, n: usize) -> Result<()> {
    if v.len() != n {
        return Err(GroupError::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(())
}

pub fn ensure_finite<'a>(
    values: impl IntoIterator<Item = &'a f64>,
    what: &'static str,
) -> Result<()> {
    if values.into_iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(GroupError::NonFinite(what))
    }
}

/// Builds a matrix from row-major nested rows, rejecting ragged input.
pub fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(GroupError::DimensionMismatch {
            expected: ncols,
            found: bad.len(),
        });
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_is_antisymmetric() {
        for n in 1..4 {
            let z = symplectic_core(n);
            assert_eq!(z.transpose(), -&z);
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![1.0, 2.0], vec![3.0]];
        assert!(from_rows(&rows).is_err());
        let ok = from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(ok[(1, 0)], 3.0);
        assert_eq!(to_rows(&ok), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
    }
}
