use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

use super::FD_STEP;
use crate::error::{GroupError, Result};

/// Partial derivatives of a field `H(p, q, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGradient {
    pub dp: DVector<f64>,
    pub dq: DVector<f64>,
    pub dt: f64,
}

/// A scalar field `H(p, q, t)` on phase space, such as a Hamiltonian.
///
/// Implementations must be re-entrant. Fields that do not override
/// [`gradient`](ScalarField::gradient) get central differences.
pub trait ScalarField: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, p: &DVector<f64>, q: &DVector<f64>, t: f64) -> f64;

    fn gradient(&self, p: &DVector<f64>, q: &DVector<f64>, t: f64) -> FieldGradient {
        numerical_gradient(self, p, q, t, FD_STEP)
    }

    fn name(&self) -> String {
        "custom".to_string()
    }
}

/// Central differences with the realized step `(x+h) - (x-h)` as divisor.
pub fn numerical_gradient<F: ScalarField + ?Sized>(
    field: &F,
    p: &DVector<f64>,
    q: &DVector<f64>,
    t: f64,
    h: f64,
) -> FieldGradient {
    let n = p.len();
    let mut dp = DVector::zeros(n);
    let mut dq = DVector::zeros(n);
    for i in 0..n {
        let (mut pp, mut pm) = (p.clone(), p.clone());
        pp[i] += h;
        pm[i] -= h;
        dp[i] = (field.eval(&pp, q, t) - field.eval(&pm, q, t)) / (pp[i] - pm[i]);

        let (mut qp, mut qm) = (q.clone(), q.clone());
        qp[i] += h;
        qm[i] -= h;
        dq[i] = (field.eval(p, &qp, t) - field.eval(p, &qm, t)) / (qp[i] - qm[i]);
    }
    let (tp, tm) = (t + h, t - h);
    let dt = (field.eval(p, q, tp) - field.eval(p, q, tm)) / (tp - tm);
    FieldGradient { dp, dq, dt }
}

/// Largest deviation between a field's own gradient and central differences
/// over `points` (each `(p, q, t)`).
pub fn gradient_consistency<F: ScalarField + ?Sized>(
    field: &F,
    points: &[(DVector<f64>, DVector<f64>, f64)],
) -> f64 {
    points
        .iter()
        .map(|(p, q, t)| {
            let a = field.gradient(p, q, *t);
            let b = numerical_gradient(field, p, q, *t, FD_STEP);
            (&a.dp - &b.dp)
                .amax()
                .max((&a.dq - &b.dq).amax())
                .max((a.dt - b.dt).abs())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroField {
    pub n: usize,
}

impl ScalarField for ZeroField {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, _: &DVector<f64>, _: &DVector<f64>, _: f64) -> f64 {
        0.0
    }

    fn gradient(&self, _: &DVector<f64>, _: &DVector<f64>, _: f64) -> FieldGradient {
        FieldGradient {
            dp: DVector::zeros(self.n),
            dq: DVector::zeros(self.n),
            dt: 0.0,
        }
    }

    fn name(&self) -> String {
        "zero".into()
    }
}

/// `H = |p|²/2` (unit mass).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeParticle {
    pub n: usize,
}

impl ScalarField for FreeParticle {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &DVector<f64>, _: &DVector<f64>, _: f64) -> f64 {
        0.5 * p.norm_squared()
    }

    fn gradient(&self, p: &DVector<f64>, _: &DVector<f64>, _: f64) -> FieldGradient {
        FieldGradient {
            dp: p.clone(),
            dq: DVector::zeros(self.n),
            dt: 0.0,
        }
    }

    fn name(&self) -> String {
        "free".into()
    }
}

/// `H = |p|²/2 - f·q`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformForce {
    pub f: DVector<f64>,
}

impl ScalarField for UniformForce {
    fn dim(&self) -> usize {
        self.f.len()
    }

    fn eval(&self, p: &DVector<f64>, q: &DVector<f64>, _: f64) -> f64 {
        0.5 * p.norm_squared() - self.f.dot(q)
    }

    fn gradient(&self, p: &DVector<f64>, _: &DVector<f64>, _: f64) -> FieldGradient {
        FieldGradient {
            dp: p.clone(),
            dq: -&self.f,
            dt: 0.0,
        }
    }

    fn name(&self) -> String {
        "uniform-force".into()
    }
}

/// `H = (|p|² + |q|²)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicOscillator {
    pub n: usize,
}

impl ScalarField for HarmonicOscillator {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &DVector<f64>, q: &DVector<f64>, _: f64) -> f64 {
        0.5 * (p.norm_squared() + q.norm_squared())
    }

    fn gradient(&self, p: &DVector<f64>, q: &DVector<f64>, _: f64) -> FieldGradient {
        FieldGradient {
            dp: p.clone(),
            dq: q.clone(),
            dt: 0.0,
        }
    }

    fn name(&self) -> String {
        "harmonic".into()
    }
}

/// `H = v·p - f·q + r·t`, the field generated by constant velocity, force
/// and power.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearGenerator {
    pub v: DVector<f64>,
    pub f: DVector<f64>,
    pub r: f64,
}

impl ScalarField for LinearGenerator {
    fn dim(&self) -> usize {
        self.v.len()
    }

    fn eval(&self, p: &DVector<f64>, q: &DVector<f64>, t: f64) -> f64 {
        self.v.dot(p) - self.f.dot(q) + self.r * t
    }

    fn gradient(&self, _: &DVector<f64>, _: &DVector<f64>, _: f64) -> FieldGradient {
        FieldGradient {
            dp: self.v.clone(),
            dq: -&self.f,
            dt: self.r,
        }
    }

    fn name(&self) -> String {
        "generators".into()
    }
}

/// A field defined by a closure; gradients by central differences.
pub struct FnField<F> {
    n: usize,
    label: String,
    func: F,
}

impl<F> FnField<F>
where
    F: Fn(&DVector<f64>, &DVector<f64>, f64) -> f64 + Send + Sync,
{
    pub fn new(n: usize, label: impl Into<String>, func: F) -> Self {
        Self {
            n,
            label: label.into(),
            func,
        }
    }
}

impl<F> fmt::Debug for FnField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnField").field("n", &self.n).field("label", &self.label).finish()
    }
}

impl<F> ScalarField for FnField<F>
where
    F: Fn(&DVector<f64>, &DVector<f64>, f64) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, p: &DVector<f64>, q: &DVector<f64>, t: f64) -> f64 {
        (self.func)(p, q, t)
    }

    fn name(&self) -> String {
        self.label.clone()
    }
}

/// Names accepted by the command line for built-in Hamiltonians.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinHamiltonian {
    Free,
    UniformForce,
    Harmonic,
    Generators,
}

impl BuiltinHamiltonian {
    pub const NAMES: &'static str = "free, uniform-force, harmonic, generators";

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "free" => Ok(Self::Free),
            "uniform-force" => Ok(Self::UniformForce),
            "harmonic" => Ok(Self::Harmonic),
            "generators" => Ok(Self::Generators),
            other => Err(GroupError::Unknown {
                what: "hamiltonian",
                name: other.to_string(),
                options: Self::NAMES,
            }),
        }
    }

    /// Instantiates the field for dimension `n`; `v`, `f`, `r` feed the
    /// parameterized variants.
    pub fn build(
        self,
        n: usize,
        v: &DVector<f64>,
        f: &DVector<f64>,
        r: f64,
    ) -> Result<Arc<dyn ScalarField>> {
        let check = |x: &DVector<f64>| {
            if x.len() == n {
                Ok(())
            } else {
                Err(GroupError::DimensionMismatch {
                    expected: n,
                    found: x.len(),
                })
            }
        };
        Ok(match self {
            Self::Free => Arc::new(FreeParticle { n }),
            Self::Harmonic => Arc::new(HarmonicOscillator { n }),
            Self::UniformForce => {
                check(f)?;
                Arc::new(UniformForce { f: f.clone() })
            }
            Self::Generators => {
                check(v)?;
                check(f)?;
                Arc::new(LinearGenerator {
                    v: v.clone(),
                    f: f.clone(),
                    r,
                })
            }
        })
    }
}
