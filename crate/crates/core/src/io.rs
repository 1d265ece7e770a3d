//! JSON documents exchanged by the command line.
//!
//! Matrices are row-major arrays of rows; phase points are `(p, q, e, t)`.
//! Numbers are written in shortest round-trip form, so parsing a rendered
//! document reproduces every value bit for bit.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{PhasePoint, Trajectory};
use crate::error::GroupError;
use crate::group::random::RandomElement;
use crate::group::{
    EuclideanElement, GroupElement, HSpElement, HamiltonElement, HeisenbergElement, Rotation, Sign,
    SymplecticElement,
};
use crate::linalg::{from_rows, to_rows};

/// Failure reading or validating a document.
#[derive(Debug, Error)]
pub enum DocumentError {
    /// Not valid JSON, or fields missing, extra or mis-sized.
    #[error("malformed document: {0}")]
    Malformed(String),
    /// Well-formed but not a group element (or an incompatible pair).
    #[error(transparent)]
    Invalid(#[from] GroupError),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Malformed(e.to_string())
    }
}

pub type DocResult<T> = std::result::Result<T, DocumentError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Hamilton,
    Heisenberg,
    Euclidean,
    Hsp,
}

impl DocumentKind {
    pub const NAMES: &'static str = "hamilton, heisenberg, euclidean, hsp";

    pub fn name(self) -> &'static str {
        match self {
            DocumentKind::Hamilton => "hamilton",
            DocumentKind::Heisenberg => "heisenberg",
            DocumentKind::Euclidean => "euclidean",
            DocumentKind::Hsp => "hsp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDocument {
    pub kind: DocumentKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i64>,
    #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
    pub rot: Option<Vec<Vec<f64>>>,
    #[serde(default, rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

impl ElementDocument {
    pub fn parse(text: &str) -> DocResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    /// Validates the document into a typed element; orthogonality and
    /// symplecticity are tested at `tol`.
    pub fn to_element(&self, tol: f64) -> DocResult<Element> {
        if self.n == 0 {
            return Err(DocumentError::Malformed("n must be at least 1".into()));
        }
        let allowed: &[&str] = match self.kind {
            DocumentKind::Hamilton => &["epsilon", "R", "f", "v", "r"],
            DocumentKind::Heisenberg => &["f", "v", "r"],
            DocumentKind::Euclidean => &["epsilon", "R", "v"],
            DocumentKind::Hsp => &["epsilon", "A", "w", "r"],
        };
        let present = [
            ("epsilon", self.epsilon.is_some()),
            ("R", self.rot.is_some()),
            ("A", self.a.is_some()),
            ("f", self.f.is_some()),
            ("v", self.v.is_some()),
            ("w", self.w.is_some()),
            ("r", self.r.is_some()),
        ];
        for (name, is_present) in present {
            let wanted = allowed.contains(&name);
            if wanted && !is_present {
                return Err(DocumentError::Malformed(format!(
                    "{} document is missing field '{name}'",
                    self.kind.name()
                )));
            }
            if !wanted && is_present {
                return Err(DocumentError::Malformed(format!(
                    "field '{name}' does not belong in a {} document",
                    self.kind.name()
                )));
            }
        }

        let n = self.n;
        Ok(match self.kind {
            DocumentKind::Hamilton => Element::Hamilton(HamiltonElement::new(
                self.sign()?,
                Rotation::with_tolerance(square(self.rot.as_deref(), n, "R")?, tol)?,
                vector(self.f.as_deref(), n, "f")?,
                vector(self.v.as_deref(), n, "v")?,
                self.r.unwrap_or_default(),
            )?),
            DocumentKind::Heisenberg => Element::Heisenberg(HeisenbergElement::new(
                vector(self.f.as_deref(), n, "f")?,
                vector(self.v.as_deref(), n, "v")?,
                self.r.unwrap_or_default(),
            )?),
            DocumentKind::Euclidean => Element::Euclidean(EuclideanElement::new(
                self.sign()?,
                Rotation::with_tolerance(square(self.rot.as_deref(), n, "R")?, tol)?,
                vector(self.v.as_deref(), n, "v")?,
            )?),
            DocumentKind::Hsp => Element::HSp(HSpElement::new(
                self.sign()?,
                SymplecticElement::with_tolerance(square(self.a.as_deref(), 2 * n, "A")?, tol)?,
                vector(self.w.as_deref(), 2 * n, "w")?,
                self.r.unwrap_or_default(),
            )?),
        })
    }

    fn sign(&self) -> DocResult<Sign> {
        match self.epsilon {
            Some(1) => Ok(Sign::Plus),
            Some(-1) => Ok(Sign::Minus),
            Some(other) => Err(GroupError::InvalidSign(other as f64).into()),
            None => Err(DocumentError::Malformed("missing field 'epsilon'".into())),
        }
    }
}

fn vector(values: Option<&[f64]>, len: usize, name: &str) -> DocResult<DVector<f64>> {
    let values = values.unwrap_or_default();
    if values.len() != len {
        return Err(DocumentError::Malformed(format!(
            "field '{name}' has length {}, expected {len}",
            values.len()
        )));
    }
    Ok(DVector::from_column_slice(values))
}

fn square(rows: Option<&[Vec<f64>]>, size: usize, name: &str) -> DocResult<DMatrix<f64>> {
    let rows = rows.unwrap_or_default();
    if rows.len() != size || rows.iter().any(|row| row.len() != size) {
        return Err(DocumentError::Malformed(format!(
            "field '{name}' must be a {size}x{size} row-major array"
        )));
    }
    Ok(from_rows(rows)?)
}

/// Any element that has a document form.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Hamilton(HamiltonElement),
    Heisenberg(HeisenbergElement),
    Euclidean(EuclideanElement),
    HSp(HSpElement),
}

impl Element {
    pub fn kind(&self) -> DocumentKind {
        match self {
            Element::Hamilton(_) => DocumentKind::Hamilton,
            Element::Heisenberg(_) => DocumentKind::Heisenberg,
            Element::Euclidean(_) => DocumentKind::Euclidean,
            Element::HSp(_) => DocumentKind::Hsp,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Element::Hamilton(g) => g.dim(),
            Element::Heisenberg(g) => g.dim(),
            Element::Euclidean(g) => g.dim(),
            Element::HSp(g) => g.dim(),
        }
    }

    /// `self · rhs`; both must be of the same kind.
    pub fn compose(&self, rhs: &Element) -> Result<Element, GroupError> {
        Ok(match (self, rhs) {
            (Element::Hamilton(a), Element::Hamilton(b)) => Element::Hamilton(a.compose(b)?),
            (Element::Heisenberg(a), Element::Heisenberg(b)) => Element::Heisenberg(a.compose(b)?),
            (Element::Euclidean(a), Element::Euclidean(b)) => Element::Euclidean(a.compose(b)?),
            (Element::HSp(a), Element::HSp(b)) => Element::HSp(a.compose(b)?),
            _ => {
                return Err(GroupError::Precondition(format!(
                    "cannot compose a {} element with a {} element",
                    self.kind().name(),
                    rhs.kind().name()
                )))
            }
        })
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Hamilton(g) => Element::Hamilton(g.inverse()),
            Element::Heisenberg(g) => Element::Heisenberg(g.inverse()),
            Element::Euclidean(g) => Element::Euclidean(g.inverse()),
            Element::HSp(g) => Element::HSp(g.inverse()),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        match self {
            Element::Hamilton(g) => g.to_matrix(),
            Element::Heisenberg(g) => g.to_matrix(),
            Element::Euclidean(g) => g.to_matrix(),
            Element::HSp(g) => g.to_matrix(),
        }
    }

    /// The element as an extended-phase-space matrix of size `2n + 2`.
    /// Euclidean elements are embedded first.
    pub fn to_phase_matrix(&self) -> DMatrix<f64> {
        match self {
            Element::Euclidean(g) => HamiltonElement::from_euclidean(g).to_matrix(),
            other => other.to_matrix(),
        }
    }

    pub fn to_document(&self) -> ElementDocument {
        let mut doc = ElementDocument {
            kind: self.kind(),
            n: self.dim(),
            epsilon: None,
            rot: None,
            a: None,
            f: None,
            v: None,
            w: None,
            r: None,
        };
        let list = |v: &DVector<f64>| v.iter().copied().collect::<Vec<_>>();
        match self {
            Element::Hamilton(g) => {
                doc.epsilon = Some(g.epsilon().as_i8().into());
                doc.rot = Some(to_rows(g.rotation().matrix()));
                doc.f = Some(list(g.f()));
                doc.v = Some(list(g.v()));
                doc.r = Some(g.r());
            }
            Element::Heisenberg(g) => {
                doc.f = Some(list(g.f()));
                doc.v = Some(list(g.v()));
                doc.r = Some(g.r());
            }
            Element::Euclidean(g) => {
                doc.epsilon = Some(g.epsilon().as_i8().into());
                doc.rot = Some(to_rows(g.rotation().matrix()));
                doc.v = Some(list(g.v()));
            }
            Element::HSp(g) => {
                doc.epsilon = Some(g.epsilon().as_i8().into());
                doc.a = Some(to_rows(g.symplectic().matrix()));
                doc.w = Some(list(g.w()));
                doc.r = Some(g.r());
            }
        }
        doc
    }
}

impl TryFrom<RandomElement> for Element {
    type Error = GroupError;

    fn try_from(e: RandomElement) -> Result<Self, GroupError> {
        match e {
            RandomElement::Hamilton(g) => Ok(Element::Hamilton(g)),
            RandomElement::Heisenberg(g) => Ok(Element::Heisenberg(g)),
            RandomElement::Euclidean(g) => Ok(Element::Euclidean(g)),
            RandomElement::HSp(g) => Ok(Element::HSp(g)),
            RandomElement::Rotation(_) | RandomElement::Symplectic(_) => Err(GroupError::Unknown {
                what: "document kind",
                name: "rotation/symplectic".into(),
                options: DocumentKind::NAMES,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub size: usize,
    pub data: Vec<Vec<f64>>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        Self {
            size: m.nrows(),
            data: to_rows(m),
        }
    }

    pub fn parse(text: &str) -> DocResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_matrix(&self) -> DocResult<DMatrix<f64>> {
        if self.data.len() != self.size || self.data.iter().any(|row| row.len() != self.size) {
            return Err(DocumentError::Malformed(format!(
                "data must be {0}x{0} to match size",
                self.size
            )));
        }
        Ok(from_rows(&self.data)?)
    }
}

/// One line of a trajectory stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryRecord {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub e: f64,
    pub t: f64,
}

impl From<&PhasePoint> for TrajectoryRecord {
    fn from(z: &PhasePoint) -> Self {
        Self {
            p: z.p.iter().copied().collect(),
            q: z.q.iter().copied().collect(),
            e: z.e,
            t: z.t,
        }
    }
}

impl TrajectoryRecord {
    pub fn to_point(&self) -> Result<PhasePoint, GroupError> {
        PhasePoint::from_slices(&self.p, &self.q, self.e, self.t)
    }
}

/// Writes one JSON record per line.
pub fn write_trajectory<W: Write>(traj: &Trajectory, out: &mut W) -> std::io::Result<()> {
    for z in traj.points() {
        serde_json::to_writer(&mut *out, &TrajectoryRecord::from(z))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trajectory(text: &str) -> DocResult<Vec<TrajectoryRecord>> {
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .map(|line| Ok(serde_json::from_str(line)?))
        .collect()
}
