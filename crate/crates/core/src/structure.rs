//! Structural facts about the groups, checked numerically: subgroup
//! membership, normality, the factorization `H(n) ≃ T(n) ⋉ T(n+1)`, and
//! `Ĥa(n) ≃ D₄ ⋉ SO(n) ⋉ H(n)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{GroupError, Result};
use crate::group::random::{self, rng_from_seed};
use crate::group::{GroupElement, HSpElement, HamiltonElement, HeisenbergElement, Rotation, Sign};
use crate::linalg::{max_abs, max_abs_diff, max_abs_vec};

/// Zero test used by the membership predicates.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupTag {
    /// `T(n)`: velocity translations `Υ(0, v, 0)`.
    TnVelocity,
    /// `T(n+1)`: force and power translations `Υ(f, 0, r)`.
    Tn1ForcePower,
    /// `H(n)`.
    Heisenberg,
    /// The linear block with no translation: `Φ(1, A, 0, 0)`.
    SpBlock,
    /// Inertial elements, `f = 0`, `r = 0`.
    Euclidean,
    /// Time reversal only.
    D2,
    /// Time reversal and parity only.
    D4Element,
}

impl SubgroupTag {
    pub const NAMES: &'static str =
        "tn-velocity, tn1-force-power, heisenberg, sp-block, euclidean, d2, d4-element";
}

impl FromStr for SubgroupTag {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tn-velocity" => Self::TnVelocity,
            "tn1-force-power" => Self::Tn1ForcePower,
            "heisenberg" => Self::Heisenberg,
            "sp-block" => Self::SpBlock,
            "euclidean" => Self::Euclidean,
            "d2" => Self::D2,
            "d4-element" => Self::D4Element,
            other => {
                return Err(GroupError::Unknown {
                    what: "subgroup tag",
                    name: other.into(),
                    options: Self::NAMES,
                })
            }
        })
    }
}

impl fmt::Display for SubgroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::TnVelocity => "tn-velocity",
            Self::Tn1ForcePower => "tn1-force-power",
            Self::Heisenberg => "heisenberg",
            Self::SpBlock => "sp-block",
            Self::Euclidean => "euclidean",
            Self::D2 => "d2",
            Self::D4Element => "d4-element",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum ElementRef<'a> {
    Hamilton(&'a HamiltonElement),
    Heisenberg(&'a HeisenbergElement),
    HSp(&'a HSpElement),
}

fn is_zero_vec(v: &nalgebra::DVector<f64>) -> bool {
    max_abs_vec(v) <= ZERO_TOL
}

fn is_zero(x: f64) -> bool {
    x.abs() <= ZERO_TOL
}

fn is_identity(m: &DMatrix<f64>) -> bool {
    max_abs_diff(m, &DMatrix::identity(m.nrows(), m.ncols())) <= ZERO_TOL
}

/// Membership predicate, zero tests at [`ZERO_TOL`].
pub fn is_member(element: ElementRef<'_>, tag: SubgroupTag) -> Result<bool> {
    match element {
        ElementRef::Heisenberg(h) => is_member(ElementRef::Hamilton(&HamiltonElement::from_heisenberg(h)), tag),
        ElementRef::Hamilton(g) => {
            let plus = g.epsilon() == Sign::Plus;
            let rot_id = g.rotation().is_identity(ZERO_TOL);
            let (f0, v0, r0) = (is_zero_vec(g.f()), is_zero_vec(g.v()), is_zero(g.r()));
            Ok(match tag {
                SubgroupTag::TnVelocity => plus && rot_id && f0 && r0,
                SubgroupTag::Tn1ForcePower => plus && rot_id && v0,
                SubgroupTag::Heisenberg => plus && rot_id,
                SubgroupTag::SpBlock => plus && f0 && v0 && r0,
                SubgroupTag::Euclidean => f0 && r0,
                SubgroupTag::D2 => rot_id && f0 && v0 && r0,
                SubgroupTag::D4Element => {
                    let n = g.dim();
                    let parity_ok = [Sign::Plus, Sign::Minus].iter().any(|s| {
                        max_abs_diff(g.rotation().matrix(), parity_rotation(n, *s).matrix()) <= ZERO_TOL
                    });
                    parity_ok && f0 && v0 && r0
                }
            })
        }
        ElementRef::HSp(p) => {
            let n = p.dim();
            let plus = p.epsilon() == Sign::Plus;
            let a_id = is_identity(p.symplectic().matrix());
            let f0 = is_zero_vec(&p.w().rows(0, n).into_owned());
            let v0 = is_zero_vec(&p.w().rows(n, n).into_owned());
            let r0 = is_zero(p.r());
            match tag {
                SubgroupTag::TnVelocity => Ok(plus && a_id && f0 && r0),
                SubgroupTag::Tn1ForcePower => Ok(plus && a_id && v0),
                SubgroupTag::Heisenberg => Ok(plus && a_id),
                SubgroupTag::SpBlock => Ok(plus && f0 && v0 && r0),
                SubgroupTag::D2 => Ok(a_id && f0 && v0 && r0),
                SubgroupTag::Euclidean | SubgroupTag::D4Element => Err(GroupError::Precondition(format!(
                    "tag {tag} is not defined on HSp elements"
                ))),
            }
        }
    }
}

/// `Υ(f, v, r) = Υ(f, 0, r + f·v) · Υ(0, v, 0)`: the `T(n+1)` factor on the
/// left, the `T(n)` factor on the right.
pub fn factor_heisenberg(h: &HeisenbergElement) -> (HeisenbergElement, HeisenbergElement) {
    let n = h.dim();
    let zero = nalgebra::DVector::zeros(n);
    let normal = HeisenbergElement::new(h.f().clone(), zero.clone(), h.r() + h.f().dot(h.v()))
        .expect("finite by construction");
    let complement = HeisenbergElement::new(zero, h.v().clone(), 0.0).expect("finite by construction");
    (normal, complement)
}

/// Parity representative in O(n): `ε̃·I` for odd `n`. For even `n`,
/// `-I ∈ SO(n)`, so the reflection `diag(ε̃, 1, …, 1)` is used instead.
pub fn parity_rotation(n: usize, parity: Sign) -> Rotation {
    let mut m = DMatrix::identity(n, n);
    if n % 2 == 1 {
        m *= parity.value();
    } else {
        m[(0, 0)] = parity.value();
    }
    Rotation::new(m).expect("signed identity is orthogonal")
}

/// An element `ς = (ε, ε̃)` of the four-element group `D₄ = D₂ × D̃₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiscreteSigns {
    pub epsilon: Sign,
    pub epsilon_tilde: Sign,
}

impl DiscreteSigns {
    pub const IDENTITY: DiscreteSigns = DiscreteSigns {
        epsilon: Sign::Plus,
        epsilon_tilde: Sign::Plus,
    };

    pub fn all() -> [DiscreteSigns; 4] {
        let mut out = [Self::IDENTITY; 4];
        let signs = [Sign::Plus, Sign::Minus];
        for (k, (e, p)) in signs.iter().flat_map(|e| signs.iter().map(move |p| (*e, *p))).enumerate() {
            out[k] = DiscreteSigns {
                epsilon: e,
                epsilon_tilde: p,
            };
        }
        out
    }

    pub fn compose(self, rhs: DiscreteSigns) -> DiscreteSigns {
        DiscreteSigns {
            epsilon: self.epsilon * rhs.epsilon,
            epsilon_tilde: self.epsilon_tilde * rhs.epsilon_tilde,
        }
    }

    /// `Φ(ε, P(ε̃), 0, 0, 0)`.
    pub fn to_element(self, n: usize) -> Result<HamiltonElement> {
        if n == 0 {
            return Err(GroupError::ZeroDimension);
        }
        let zero = nalgebra::DVector::zeros(n);
        HamiltonElement::new(self.epsilon, parity_rotation(n, self.epsilon_tilde), zero.clone(), zero, 0.0)
    }
}

pub fn d4_elements(n: usize) -> Result<Vec<HamiltonElement>> {
    DiscreteSigns::all().iter().map(|s| s.to_element(n)).collect()
}

/// `ς · g · ς⁻¹`.
pub fn d4_action(s: DiscreteSigns, g: &HamiltonElement) -> Result<HamiltonElement> {
    let sigma = s.to_element(g.dim())?;
    sigma.compose(g)?.compose(&sigma.inverse())
}

/// `g = ς · ρ · Υ` with `ς ∈ D₄`, `ρ ∈ SO(n)`, `Υ ∈ H(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub signs: DiscreteSigns,
    pub rotation: Rotation,
    pub translation: HeisenbergElement,
}

impl Decomposition {
    pub fn recompose(&self) -> Result<HamiltonElement> {
        let n = self.rotation.dim();
        let zero = nalgebra::DVector::zeros(n);
        let rho = HamiltonElement::new(Sign::Plus, self.rotation.clone(), zero.clone(), zero, 0.0)?;
        self.signs
            .to_element(n)?
            .compose(&rho)?
            .compose(&HamiltonElement::from_heisenberg(&self.translation))
    }
}

pub fn decompose(g: &HamiltonElement) -> Decomposition {
    let n = g.dim();
    let signs = DiscreteSigns {
        epsilon: g.epsilon(),
        epsilon_tilde: g.rotation().parity(),
    };
    let parity = parity_rotation(n, signs.epsilon_tilde);
    // P is an involution, so ρ = P·R.
    let rotation = parity.compose(g.rotation()).expect("same dimension");
    let rinv = g.rotation().inverse();
    let translation = HeisenbergElement::new(
        rinv.apply(g.f()),
        rinv.apply(g.v()),
        g.epsilon().value() * g.r(),
    )
    .expect("finite by construction");
    Decomposition {
        signs,
        rotation,
        translation,
    }
}

/// Largest parameter difference between two Hamilton elements of equal
/// dimension; signs must agree exactly or the result is infinite.
pub fn parameter_distance(a: &HamiltonElement, b: &HamiltonElement) -> f64 {
    if a.epsilon() != b.epsilon() || a.dim() != b.dim() {
        return f64::INFINITY;
    }
    max_abs_diff(a.rotation().matrix(), b.rotation().matrix())
        .max(max_abs_vec(&(a.f() - b.f())))
        .max(max_abs_vec(&(a.v() - b.v())))
        .max((a.r() - b.r()).abs())
}

fn heis_distance(a: &HeisenbergElement, b: &HeisenbergElement) -> f64 {
    max_abs_vec(&(a.f() - b.f()))
        .max(max_abs_vec(&(a.v() - b.v())))
        .max((a.r() - b.r()).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub trials: usize,
    pub max_recompose_residual: f64,
    pub max_uniqueness_residual: f64,
    pub rotations_special: bool,
    pub passed: bool,
}

/// Factors `trials` random elements, recomposes them, and re-factors the
/// recomposition to confirm the factors are unique.
pub fn decomposition_report(n: usize, trials: usize, seed: u64) -> Result<DecompositionReport> {
    if trials == 0 {
        return Err(GroupError::Precondition("trials must be at least 1".into()));
    }
    if n == 0 {
        return Err(GroupError::ZeroDimension);
    }
    let mut rng = rng_from_seed(seed);
    let mut recompose = 0.0_f64;
    let mut uniqueness = 0.0_f64;
    let mut special = true;
    for _ in 0..trials {
        let g = random::hamilton(n, &mut rng);
        let d = decompose(&g);
        special &= d.rotation.parity() == Sign::Plus;
        let back = d.recompose()?;
        recompose = recompose.max(parameter_distance(&g, &back));
        let again = decompose(&back);
        let u = if again.signs == d.signs {
            max_abs_diff(again.rotation.matrix(), d.rotation.matrix())
                .max(heis_distance(&again.translation, &d.translation))
        } else {
            f64::INFINITY
        };
        uniqueness = uniqueness.max(u);
    }
    Ok(DecompositionReport {
        n,
        trials,
        max_recompose_residual: recompose,
        max_uniqueness_residual: uniqueness,
        rotations_special: special,
        passed: recompose <= ZERO_TOL && uniqueness <= ZERO_TOL && special,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmbientGroup {
    Hamilton,
    #[serde(rename = "hsp")]
    HSp,
    Heisenberg,
}

/// A conjugate that leaves the subgroup.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub conjugator: HeisenbergElement,
    pub member: HeisenbergElement,
    pub conjugate: HeisenbergElement,
    /// The power component of the conjugate, `-2 f′·v`.
    pub escaping_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalityReport {
    pub subgroup: SubgroupTag,
    pub ambient: AmbientGroup,
    pub trials: usize,
    pub normal: bool,
    /// Largest deviation of a conjugate from the subgroup's form.
    pub max_residual: f64,
    pub witness: Option<Witness>,
}

/// Velocity translation `Υ(0, v, 0)` conjugated by `Υ(f′, 0, 0)`.
pub fn velocity_witness(f_prime: &nalgebra::DVector<f64>, v: &nalgebra::DVector<f64>) -> Result<Witness> {
    let zero = nalgebra::DVector::zeros(v.len());
    let conjugator = HeisenbergElement::new(f_prime.clone(), zero.clone(), 0.0)?;
    let member = HeisenbergElement::new(zero, v.clone(), 0.0)?;
    let conjugate = conjugator.conjugate(&member)?;
    Ok(Witness {
        escaping_r: conjugate.r(),
        conjugator,
        member,
        conjugate,
    })
}

/// Samples conjugates `g·h·g⁻¹` for normal-subgroup claims, or produces the
/// witness for the velocity translations, which are not normal in `H(n)`.
///
/// Supported pairings: `H(n)` in the Hamilton or HSp group, `T(n+1)` in
/// `H(n)`, and `T(n)` in `H(n)`.
pub fn normality_check(
    subgroup: SubgroupTag,
    ambient: AmbientGroup,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<NormalityReport> {
    if trials == 0 {
        return Err(GroupError::Precondition("trials must be at least 1".into()));
    }
    if n == 0 {
        return Err(GroupError::ZeroDimension);
    }
    let mut rng = rng_from_seed(seed);
    let mut max_residual = 0.0_f64;
    let mut normal = true;
    let report = |normal, max_residual, witness| NormalityReport {
        subgroup,
        ambient,
        trials,
        normal,
        max_residual,
        witness,
    };
    match (subgroup, ambient) {
        (SubgroupTag::Heisenberg, AmbientGroup::Hamilton | AmbientGroup::HSp) => {
            for _ in 0..trials {
                let (g, ginv) = match ambient {
                    AmbientGroup::Hamilton => {
                        let g = random::hamilton(n, &mut rng);
                        (g.to_matrix(), g.inverse().to_matrix())
                    }
                    _ => {
                        let g = random::hsp(n, &mut rng);
                        (g.to_matrix(), g.inverse().to_matrix())
                    }
                };
                let h = random::heisenberg(n, &mut rng);
                let conj = g * h.to_matrix() * ginv;
                let residual = heisenberg_form_residual(&conj);
                max_residual = max_residual.max(residual);
                normal &= residual <= ZERO_TOL;
            }
            Ok(report(normal, max_residual, None))
        }
        (SubgroupTag::Tn1ForcePower, AmbientGroup::Heisenberg) => {
            for _ in 0..trials {
                let g = random::heisenberg(n, &mut rng);
                let h = HeisenbergElement::new(random::vector(n, &mut rng), nalgebra::DVector::zeros(n), random::unit(&mut rng))?;
                let conj = g.conjugate(&h)?;
                let residual = max_abs_vec(conj.v());
                max_residual = max_residual.max(residual);
                normal &= residual == 0.0;
            }
            Ok(report(normal, max_residual, None))
        }
        (SubgroupTag::TnVelocity, AmbientGroup::Heisenberg) => {
            let mut e1 = nalgebra::DVector::zeros(n);
            e1[0] = 1.0;
            let witness = velocity_witness(&e1, &e1)?;
            let residual = witness.escaping_r.abs();
            Ok(report(residual <= ZERO_TOL, residual, Some(witness)))
        }
        _ => Err(GroupError::Precondition(format!(
            "no normality claim for subgroup {subgroup} in the {ambient:?} group"
        ))),
    }
}

/// Deviation of a `(2n+2)`-square matrix from the `Υ(f, v, r)` pattern.
pub fn heisenberg_form_residual(m: &DMatrix<f64>) -> f64 {
    let n = (m.nrows() - 2) / 2;
    let t = 2 * n + 1;
    let f = m.view((0, t), (n, 1)).column(0).into_owned();
    let v = m.view((n, t), (n, 1)).column(0).into_owned();
    match HeisenbergElement::new(f, v, m[(2 * n, t)]) {
        Ok(h) => max_abs(&(h.to_matrix() - m)),
        Err(_) => f64::INFINITY,
    }
}
