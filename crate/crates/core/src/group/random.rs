//! Seeded sampling of group elements.
//!
//! Rotations come from the orthonormal factor of a random matrix, symplectic
//! matrices from the exponential of a Hamiltonian generator `ζ°·S` with `S`
//! symmetric, and scalar parameters are uniform in `[-1, 1]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    EuclideanElement, HSpElement, HamiltonElement, HeisenbergElement, Rotation, Sign,
    SymplecticElement,
};
use crate::error::{GroupError, Result};
use crate::linalg::symplectic_core;

/// Deterministic generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Rotation,
    Euclidean,
    Heisenberg,
    Symplectic,
    HSp,
    Hamilton,
}

impl ElementKind {
    pub const NAMES: &'static str = "rotation, euclidean, heisenberg, symplectic, hsp, hamilton";

    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Rotation => "rotation",
            ElementKind::Euclidean => "euclidean",
            ElementKind::Heisenberg => "heisenberg",
            ElementKind::Symplectic => "symplectic",
            ElementKind::HSp => "hsp",
            ElementKind::Hamilton => "hamilton",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementKind {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "rotation" => ElementKind::Rotation,
            "euclidean" => ElementKind::Euclidean,
            "heisenberg" => ElementKind::Heisenberg,
            "symplectic" => ElementKind::Symplectic,
            "hsp" => ElementKind::HSp,
            "hamilton" => ElementKind::Hamilton,
            other => {
                return Err(GroupError::Unknown {
                    what: "element kind",
                    name: other.to_string(),
                    options: Self::NAMES,
                })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RandomElement {
    Rotation(Rotation),
    Euclidean(EuclideanElement),
    Heisenberg(HeisenbergElement),
    Symplectic(SymplecticElement),
    HSp(HSpElement),
    Hamilton(HamiltonElement),
}

/// Draws one element of `kind` with a fresh generator seeded by `seed`.
pub fn random_element(kind: ElementKind, n: usize, seed: u64) -> Result<RandomElement> {
    let mut rng = rng_from_seed(seed);
    sample(kind, n, &mut rng)
}

pub fn sample<R: Rng + ?Sized>(kind: ElementKind, n: usize, rng: &mut R) -> Result<RandomElement> {
    if n == 0 {
        return Err(GroupError::ZeroDimension);
    }
    Ok(match kind {
        ElementKind::Rotation => RandomElement::Rotation(rotation(n, rng)),
        ElementKind::Euclidean => RandomElement::Euclidean(euclidean(n, rng)),
        ElementKind::Heisenberg => RandomElement::Heisenberg(heisenberg(n, rng)),
        ElementKind::Symplectic => RandomElement::Symplectic(symplectic(n, rng)),
        ElementKind::HSp => RandomElement::HSp(hsp(n, rng)),
        ElementKind::Hamilton => RandomElement::Hamilton(hamilton(n, rng)),
    })
}

pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

pub fn vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(n, |_, _| unit(rng))
}

pub fn sign<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.gen::<bool>() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Random element of O(n); either determinant sign can occur.
pub fn rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Rotation {
    loop {
        let m = DMatrix::from_fn(n, n, |_, _| unit(rng));
        let qr = m.qr();
        let rdiag = qr.r().diagonal();
        if rdiag.iter().any(|d| d.abs() < 1e-3) {
            continue;
        }
        let mut q = qr.q();
        for (j, d) in rdiag.iter().enumerate() {
            if *d < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        return Rotation::from_matrix_unchecked(q);
    }
}

/// Random element of SO(n).
pub fn special_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Rotation {
    let r = rotation(n, rng);
    if r.parity() == Sign::Plus {
        return r;
    }
    let mut m = r.into_matrix();
    m.column_mut(0).neg_mut();
    Rotation::from_matrix_unchecked(m)
}

/// `exp(ζ°·S)` with `S` symmetric, entries of `S` uniform in `[-1/2, 1/2]`.
pub fn symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticElement {
    let size = 2 * n;
    let mut s = DMatrix::zeros(size, size);
    for i in 0..size {
        for j in i..size {
            let x = 0.5 * unit(rng);
            s[(i, j)] = x;
            s[(j, i)] = x;
        }
    }
    let generator = symplectic_core(n) * s;
    SymplecticElement::from_matrix_unchecked(generator.exp())
}

pub fn heisenberg<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HeisenbergElement {
    let f = vector(n, rng);
    let v = vector(n, rng);
    let r = unit(rng);
    HeisenbergElement::new(f, v, r).expect("finite by construction")
}

pub fn euclidean<R: Rng + ?Sized>(n: usize, rng: &mut R) -> EuclideanElement {
    let eps = sign(rng);
    let rot = rotation(n, rng);
    EuclideanElement::new(eps, rot, vector(n, rng)).expect("dimensions agree")
}

pub fn hsp<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HSpElement {
    let eps = sign(rng);
    let a = symplectic(n, rng);
    let w = vector(2 * n, rng);
    HSpElement::new(eps, a, w, unit(rng)).expect("dimensions agree")
}

pub fn hamilton<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HamiltonElement {
    let eps = sign(rng);
    let rot = rotation(n, rng);
    let f = vector(n, rng);
    let v = vector(n, rng);
    HamiltonElement::new(eps, rot, f, v, unit(rng)).expect("dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{congruence_residual, orthogonality_residual};

    #[test]
    fn deterministic_for_fixed_seed() {
        for kind in [
            ElementKind::Rotation,
            ElementKind::Euclidean,
            ElementKind::Heisenberg,
            ElementKind::Symplectic,
            ElementKind::HSp,
            ElementKind::Hamilton,
        ] {
            assert_eq!(random_element(kind, 3, 42).unwrap(), random_element(kind, 3, 42).unwrap());
        }
        assert_ne!(
            random_element(ElementKind::Hamilton, 2, 1).unwrap(),
            random_element(ElementKind::Hamilton, 2, 2).unwrap()
        );
    }

    #[test]
    fn samples_are_members() {
        let mut rng = rng_from_seed(7);
        for n in 1..=3 {
            for _ in 0..200 {
                let r = rotation(n, &mut rng);
                assert!(orthogonality_residual(r.matrix()) <= 1e-12);
                let a = symplectic(n, &mut rng);
                assert!(congruence_residual(a.matrix(), &symplectic_core(n)) <= 1e-10);
                assert_eq!(special_rotation(n, &mut rng).parity(), Sign::Plus);
            }
        }
    }

    #[test]
    fn unknown_kind() {
        let err = "lorentz".parse::<ElementKind>().unwrap_err();
        assert!(err.to_string().contains("hamilton"));
        assert!(random_element(ElementKind::Hamilton, 0, 0).is_err());
    }
}
