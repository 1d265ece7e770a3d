//! Relativity groups for frames of particles in Newtonian mechanics.
//!
//! The crate realizes the hierarchy
//! `Ê(n) ⊂ Ĥa(n) = D₂ ⋉ O(n) ⋉ H(n) ⊂ HŜp(2n) = D₂ ⋉ Sp(2n) ⋉ H(n)`
//! acting on the extended phase space `(p, q, e, t)`:
//!
//! - [`group`]: element types, composition/inverse laws, matrix realizations;
//! - [`invariance`]: the time, length and symplectic forms, congruence
//!   residuals, and a classifier placing a matrix in the hierarchy;
//! - [`dynamics`]: frame transformations built from (velocity, force, power)
//!   generators, finite-difference Jacobians, and a fixed-step integrator;
//! - [`structure`]: subgroup membership, normality, semidirect factorization
//!   and the discrete `D₄` decomposition;
//! - [`io`] and [`cli`]: JSON documents and the `hamgroup` command line.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod group;
pub mod invariance;
pub mod io;
pub mod linalg;
pub mod structure;

pub use error::{GroupError, Result};
pub use group::{
    EuclideanElement, GroupElement, HSpElement, HamiltonElement, HeisenbergElement, Rotation, Sign,
    SymplecticElement,
};
