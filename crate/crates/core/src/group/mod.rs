//! Group elements of the relativity-group hierarchy, their composition and
//! inverse laws in parameter form, and their canonical matrix realizations.
//!
//! Composition convention: `a.compose(&b)` is the product `a · b`, where `a`
//! is the outer (left, doubly-primed) factor. Matrix realizations satisfy
//! `a.compose(&b)?.to_matrix() == a.to_matrix() * b.to_matrix()`.

mod euclidean;
mod hamilton;
mod heisenberg;
pub mod random;
mod rotation;
mod symplectic;

use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;

use crate::error::{GroupError, Result};

pub use euclidean::EuclideanElement;
pub use hamilton::HamiltonElement;
pub use heisenberg::HeisenbergElement;
pub use rotation::Rotation;
pub use symplectic::{HSpElement, SymplecticElement};

/// Tolerance used when validating membership at construction time.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// A discrete sign factor: time reversal `ε` or parity `ε̃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Exact conversion; anything other than `±1.0` is rejected.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x == 1.0 {
            Ok(Sign::Plus)
        } else if x == -1.0 {
            Ok(Sign::Minus)
        } else {
            Err(GroupError::InvalidSign(x))
        }
    }

    /// Nearest sign when `x` is within `tol` of `±1`.
    pub fn nearest(x: f64, tol: f64) -> Option<Self> {
        if (x - 1.0).abs() <= tol {
            Some(Sign::Plus)
        } else if (x + 1.0).abs() <= tol {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// Common surface of every element kind.
pub trait GroupElement: Sized {
    /// The dimension parameter `n` (spatial dimension).
    fn dim(&self) -> usize;

    /// The product `self · rhs`.
    fn compose(&self, rhs: &Self) -> Result<Self>;

    fn inverse(&self) -> Self;

    /// Canonical matrix realization.
    fn to_matrix(&self) -> DMatrix<f64>;
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(GroupError::DimensionMismatch { expected, found })
    }
}

/// Size of the extended phase space `(p, q, e, t)` for dimension `n`.
pub fn phase_size(n: usize) -> usize {
    2 * n + 2
}

/// Recovers `n` from a phase-space matrix size `2n + 2`.
pub fn dim_from_phase_size(size: usize) -> Result<usize> {
    if size < 4 || !size.is_multiple_of(2) {
        return Err(GroupError::BadSize(size));
    }
    Ok((size - 2) / 2)
}
