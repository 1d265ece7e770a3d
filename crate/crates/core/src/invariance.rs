//! Bilinear forms, invariance residuals and the group-membership classifier.
//!
//! Every residual is the largest absolute entry of `ᵗM·G·M - G`, so each
//! block constraint of the derivation can be read off directly.
//!
//! The classifier walks the nested ladder
//! `GeneralLinear ⊃ InhomGL ⊃ HSp ⊃ Hamilton`:
//!
//! 1. time line element `dt²` invariant: last row is `(0, …, 0, ε)`, `ε = ±1`;
//! 2. symplectic form invariant: the `b = 0`, `a = ε`, `c = εᵗAζ°w` block
//!    conditions, i.e. the matrix is `Φ(ε, A, w, r)` with `A ∈ Sp(2n)`;
//! 3. rest-frame length `dq²` invariant: `A₂₁ = 0`, `A₂₂ = R ∈ O(n)`, which
//!    together with step 2 forces `A₁₁ = R` and `A₁₂ = 0`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GroupError, Result};
use crate::group::{
    dim_from_phase_size, HSpElement, HamiltonElement, Rotation, Sign, SymplecticElement,
};
use crate::linalg::{
    congruence_residual, ensure_square, max_abs, max_abs_diff, orthogonality_residual,
    symplectic_core,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormRole {
    /// `η°`: the Newtonian time line element `dt²`.
    Time,
    /// `η^q`: spatial length `dq²`.
    Length,
    /// `ζ`: the full symplectic form on `(p, q, e, t)`.
    Symplectic,
    /// `ζ°`: the `2n x 2n` symplectic form on `(p, q)`.
    SymplecticCore,
}

impl FormRole {
    pub const NAMES: &'static str = "time, length, symplectic, symplectic-core";

    pub fn name(self) -> &'static str {
        match self {
            FormRole::Time => "time",
            FormRole::Length => "length",
            FormRole::Symplectic => "symplectic",
            FormRole::SymplecticCore => "symplectic-core",
        }
    }
}

impl FromStr for FormRole {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(FormRole::Time),
            "length" => Ok(FormRole::Length),
            "symplectic" => Ok(FormRole::Symplectic),
            "symplectic-core" => Ok(FormRole::SymplecticCore),
            other => Err(GroupError::Unknown {
                what: "form role",
                name: other.to_string(),
                options: Self::NAMES,
            }),
        }
    }
}

/// The space a form lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// Newtonian space-time `(q, t)`, size `n + 1`.
    Spacetime,
    /// Extended phase space `(p, q, e, t)`, size `2n + 2`.
    Phase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    role: FormRole,
    space: Space,
    n: usize,
    matrix: DMatrix<f64>,
}

impl QuadraticForm {
    pub fn build(role: FormRole, space: Space, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::ZeroDimension);
        }
        let matrix = match (role, space) {
            (FormRole::SymplecticCore, _) => symplectic_core(n),
            (FormRole::Time, Space::Spacetime) => {
                let mut m = DMatrix::zeros(n + 1, n + 1);
                m[(n, n)] = 1.0;
                m
            }
            (FormRole::Length, Space::Spacetime) => {
                let mut m = DMatrix::zeros(n + 1, n + 1);
                m.view_mut((0, 0), (n, n)).fill_with_identity();
                m
            }
            (FormRole::Symplectic, Space::Spacetime) => {
                return Err(GroupError::Precondition(
                    "the symplectic form is defined on phase space only".into(),
                ))
            }
            (FormRole::Time, Space::Phase) => {
                let t = 2 * n + 1;
                let mut m = DMatrix::zeros(t + 1, t + 1);
                m[(t, t)] = 1.0;
                m
            }
            (FormRole::Length, Space::Phase) => {
                let mut m = DMatrix::zeros(2 * n + 2, 2 * n + 2);
                m.view_mut((n, n), (n, n)).fill_with_identity();
                m
            }
            (FormRole::Symplectic, Space::Phase) => {
                let (e, t) = (2 * n, 2 * n + 1);
                let mut m = DMatrix::zeros(2 * n + 2, 2 * n + 2);
                m.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&symplectic_core(n));
                m[(e, t)] = -1.0;
                m[(t, e)] = 1.0;
                m
            }
        };
        Ok(Self {
            role,
            space,
            n,
            matrix,
        })
    }

    /// Form on the extended phase space.
    pub fn phase(role: FormRole, n: usize) -> Result<Self> {
        Self::build(role, Space::Phase, n)
    }

    pub fn role(&self) -> FormRole {
        self.role
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// `max |ᵗM·G·M - G|`; zero iff `M` preserves the form exactly.
pub fn invariance_residual(m: &DMatrix<f64>, form: &QuadraticForm) -> Result<f64> {
    let size = ensure_square(m)?;
    if size != form.matrix.nrows() {
        return Err(GroupError::DimensionMismatch {
            expected: form.matrix.nrows(),
            found: size,
        });
    }
    Ok(congruence_residual(m, &form.matrix))
}

/// Block residuals of the rest-frame reduction `A = diag(R, R)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestFrameReport {
    pub passed: bool,
    /// `max |A₂₁|`.
    pub a21: f64,
    /// `max |A₁₂|`.
    pub a12: f64,
    /// `max |A₁₁ - R|` with `R = A₂₂`.
    pub a11: f64,
    /// `max |ᵗR·R - I|`.
    pub orthogonality: f64,
    /// Length-form residual of `Φ(1, A, 0, 0)`.
    pub rest_length: f64,
}

/// Checks whether a symplectic `A` reduces to `diag(R, R)` with `R ∈ O(n)`.
pub fn verify_rest_frame_reduction(a: &SymplecticElement, tol: f64) -> RestFrameReport {
    rest_frame_blocks(a.matrix(), tol)
}

fn rest_frame_blocks(a: &DMatrix<f64>, tol: f64) -> RestFrameReport {
    let n = a.nrows() / 2;
    let a11 = a.view((0, 0), (n, n));
    let a12 = a.view((0, n), (n, n));
    let a21 = a.view((n, 0), (n, n));
    let r = a.view((n, n), (n, n)).into_owned();
    let a21_res = max_abs(&a21.into_owned());
    let a12_res = max_abs(&a12.into_owned());
    let a11_res = max_abs_diff(&a11.into_owned(), &r);
    let orth = orthogonality_residual(&r);

    // ᵗP·η^q·P for P = Φ(1, A, 0, 0) only sees the A₂• blocks.
    let a2 = a.view((n, 0), (n, 2 * n)).into_owned();
    let mut target = DMatrix::zeros(2 * n, 2 * n);
    target.view_mut((n, n), (n, n)).fill_with_identity();
    let rest_length = max_abs_diff(&(a2.transpose() * &a2), &target);

    RestFrameReport {
        passed: a21_res <= tol && a12_res <= tol && a11_res <= tol && orth <= tol,
        a21: a21_res,
        a12: a12_res,
        a11: a11_res,
        orthogonality: orth,
        rest_length,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Hamilton,
    #[serde(rename = "hsp")]
    HSp,
    InhomGl,
    GeneralLinear,
    NotAGroupElement,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Hamilton => "hamilton",
            Verdict::HSp => "hsp",
            Verdict::InhomGl => "inhom-gl",
            Verdict::GeneralLinear => "general-linear",
            Verdict::NotAGroupElement => "not-a-group-element",
        }
    }

    /// Position in the ladder; larger is stricter.
    pub fn rank(self) -> u8 {
        match self {
            Verdict::NotAGroupElement => 0,
            Verdict::GeneralLinear => 1,
            Verdict::InhomGl => 2,
            Verdict::HSp => 3,
            Verdict::Hamilton => 4,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters recovered for the verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassParams {
    Hamilton(HamiltonElement),
    HSp(HSpElement),
    /// `Φ = [[A, b, w], [ᵗc, a, r], [0, 0, ε]]` with no further structure.
    InhomGl {
        epsilon: Sign,
    },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    pub time: f64,
    pub symplectic: f64,
    pub rest_length: f64,
    pub orthogonality: f64,
    /// `max |to_matrix(params) - M|` for the Hamilton verdict.
    pub reconstruction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub n: usize,
    pub params: ClassParams,
    pub residuals: Residuals,
    pub rest_frame: Option<RestFrameReport>,
}

/// Places `m` at the strictest rung of the ladder whose constraints all hold
/// within `tol`.
///
/// Non-finite input yields [`Verdict::NotAGroupElement`]; non-square, odd or
/// singular input (`|det| < tol · size`) is an error.
pub fn classify(m: &DMatrix<f64>, tol: f64) -> Result<Classification> {
    let size = ensure_square(m)?;
    let n = dim_from_phase_size(size)?;
    if m.iter().any(|x| !x.is_finite()) {
        return Ok(Classification {
            verdict: Verdict::NotAGroupElement,
            n,
            params: ClassParams::None,
            residuals: Residuals {
                time: f64::INFINITY,
                symplectic: f64::INFINITY,
                rest_length: f64::INFINITY,
                orthogonality: f64::INFINITY,
                reconstruction: None,
            },
            rest_frame: None,
        });
    }
    let det = m.determinant();
    if det.abs() < tol * size as f64 {
        return Err(GroupError::Singular { det });
    }

    let time = congruence_residual(m, QuadraticForm::phase(FormRole::Time, n)?.matrix());
    let symplectic = congruence_residual(m, QuadraticForm::phase(FormRole::Symplectic, n)?.matrix());
    let a = m.view((0, 0), (2 * n, 2 * n)).into_owned();
    let rest = rest_frame_blocks(&a, tol);
    let mut residuals = Residuals {
        time,
        symplectic,
        rest_length: rest.rest_length,
        orthogonality: rest.orthogonality,
        reconstruction: None,
    };
    let (e, t) = (2 * n, 2 * n + 1);

    let general = |residuals| Classification {
        verdict: Verdict::GeneralLinear,
        n,
        params: ClassParams::None,
        residuals,
        rest_frame: None,
    };
    if time > tol {
        return Ok(general(residuals));
    }
    let Some(epsilon) = Sign::nearest(m[(t, t)], tol) else {
        return Ok(general(residuals));
    };
    if symplectic > tol {
        return Ok(Classification {
            verdict: Verdict::InhomGl,
            n,
            params: ClassParams::InhomGl { epsilon },
            residuals,
            rest_frame: None,
        });
    }

    let w = DVector::from_iterator(2 * n, (0..2 * n).map(|i| m[(i, t)]));
    let hsp = SymplecticElement::with_tolerance(a, tol)
        .and_then(|a| HSpElement::new(epsilon, a, w, m[(e, t)]))?;

    if rest.passed {
        let r = m.view((n, n), (n, n)).into_owned();
        if let Ok(rot) = Rotation::with_tolerance(r, tol) {
            let g = HamiltonElement::new(
                epsilon,
                rot,
                hsp.w().rows(0, n).into_owned(),
                hsp.w().rows(n, n).into_owned(),
                hsp.r(),
            )?;
            let recon = max_abs_diff(&crate::group::GroupElement::to_matrix(&g), m);
            residuals.reconstruction = Some(recon);
            if recon <= tol {
                return Ok(Classification {
                    verdict: Verdict::Hamilton,
                    n,
                    params: ClassParams::Hamilton(g),
                    residuals,
                    rest_frame: Some(rest),
                });
            }
        }
    }
    Ok(Classification {
        verdict: Verdict::HSp,
        n,
        params: ClassParams::HSp(hsp),
        residuals,
        rest_frame: Some(rest),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{random, GroupElement};

    #[test]
    fn form_layouts() {
        let time = QuadraticForm::build(FormRole::Time, Space::Spacetime, 3).unwrap();
        assert_eq!(time.matrix().shape(), (4, 4));
        assert_eq!(time.matrix()[(3, 3)], 1.0);
        assert_eq!(time.matrix().iter().filter(|x| **x != 0.0).count(), 1);

        let core = QuadraticForm::phase(FormRole::SymplecticCore, 1).unwrap();
        assert_eq!(core.matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));

        let length = QuadraticForm::phase(FormRole::Length, 2).unwrap();
        let mut expected = DMatrix::zeros(6, 6);
        expected[(2, 2)] = 1.0;
        expected[(3, 3)] = 1.0;
        assert_eq!(length.matrix(), &expected);

        let zeta = QuadraticForm::phase(FormRole::Symplectic, 2).unwrap();
        assert_eq!(zeta.matrix().transpose(), -zeta.matrix());
        assert_eq!(zeta.matrix()[(4, 5)], -1.0);
        assert_eq!(zeta.matrix()[(5, 4)], 1.0);

        assert!(QuadraticForm::build(FormRole::Symplectic, Space::Spacetime, 2).is_err());
        assert!("metric".parse::<FormRole>().is_err());
        assert_eq!("symplectic-core".parse::<FormRole>().unwrap(), FormRole::SymplecticCore);
    }

    #[test]
    fn residual_examples() {
        let zeta = QuadraticForm::phase(FormRole::Symplectic, 1).unwrap();
        assert_eq!(invariance_residual(&DMatrix::identity(4, 4), &zeta).unwrap(), 0.0);
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0, 1.0, 1.0]));
        assert_eq!(invariance_residual(&m, &zeta).unwrap(), 3.0);
        assert!(invariance_residual(&DMatrix::identity(6, 6), &zeta).is_err());
    }

    #[test]
    fn rest_frame_examples() {
        let shear = SymplecticElement::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])).unwrap();
        let rep = verify_rest_frame_reduction(&shear, 1e-10);
        assert!(!rep.passed);
        assert_eq!(rep.a12, 1.0);
        assert_eq!(rep.a21, 0.0);

        let squeeze = SymplecticElement::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).unwrap();
        let rep = verify_rest_frame_reduction(&squeeze, 1e-10);
        assert!(!rep.passed);
        assert_eq!(rep.orthogonality, 0.75);

        let mut rng = random::rng_from_seed(3);
        let r = random::rotation(3, &mut rng);
        let a = SymplecticElement::block_diagonal(r.matrix());
        assert!(verify_rest_frame_reduction(&a, 1e-10).passed);
    }

    #[test]
    fn classify_identity() {
        let c = classify(&DMatrix::identity(8, 8), 1e-10).unwrap();
        assert_eq!(c.verdict, Verdict::Hamilton);
        assert_eq!(c.n, 3);
        assert_eq!(c.params, ClassParams::Hamilton(HamiltonElement::identity(3).unwrap()));
    }

    #[test]
    fn classify_ladder() {
        let mut rng = random::rng_from_seed(11);
        let g = random::hamilton(2, &mut rng);
        let c = classify(&g.to_matrix(), 1e-10).unwrap();
        assert_eq!(c.verdict, Verdict::Hamilton);

        let p = random::hsp(2, &mut rng);
        assert_eq!(classify(&p.to_matrix(), 1e-10).unwrap().verdict, Verdict::HSp);

        let mut m = g.to_matrix();
        m[(5, 0)] = 0.3;
        assert_eq!(classify(&m, 1e-10).unwrap().verdict, Verdict::GeneralLinear);

        let mut m = g.to_matrix();
        m[(0, 4)] = 0.3;
        let c = classify(&m, 1e-10).unwrap();
        assert_eq!(c.verdict, Verdict::InhomGl);
        assert_eq!(c.params, ClassParams::InhomGl { epsilon: g.epsilon() });
    }

    #[test]
    fn classify_errors() {
        assert!(matches!(classify(&DMatrix::zeros(4, 3), 1e-10), Err(GroupError::NotSquare { .. })));
        assert!(matches!(classify(&DMatrix::identity(5, 5), 1e-10), Err(GroupError::BadSize(5))));
        assert!(matches!(classify(&DMatrix::zeros(4, 4), 1e-10), Err(GroupError::Singular { .. })));
        let mut m = DMatrix::identity(4, 4);
        m[(0, 0)] = f64::NAN;
        assert_eq!(classify(&m, 1e-10).unwrap().verdict, Verdict::NotAGroupElement);
    }
}
