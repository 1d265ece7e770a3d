//! The `hamgroup` command line.
//!
//! Exit codes: 0 on success, 1 when an input is well-formed but fails a
//! membership or validation check, 2 on usage or parse errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::DVector;
use serde_json::{json, Value};

use crate::dynamics::{
    integrate, jacobian, transform_trajectory, verify_hamilton_equations, BuiltinHamiltonian, FrameTransformation,
    FreeParticle, PhasePoint, FD_STEP,
};
use crate::error::GroupError;
use crate::group::random::{random_element, ElementKind};
use crate::invariance::{classify, invariance_residual, ClassParams, Classification, FormRole, QuadraticForm};
use crate::io::{write_trajectory, DocumentError, DocumentKind, Element, ElementDocument, MatrixDocument};
use crate::linalg::max_abs_vec;

#[derive(Debug, Parser)]
#[command(name = "hamgroup", version, about = "Relativity groups of noninertial frames")]
pub struct Cli {
    /// Tolerance for membership and classification.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Seed for commands that sample.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compose two element documents, `lhs · rhs`.
    Compose { lhs: PathBuf, rhs: PathBuf },
    /// Invert an element document.
    Invert { file: PathBuf },
    /// Place a matrix document in the group hierarchy.
    Classify { file: PathBuf },
    /// Report the time, symplectic and length form residuals of an element.
    Check { file: PathBuf },
    /// Numerical Jacobian of the frame transformation built from generators.
    Jacobian {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        v: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        f: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        r: f64,
        /// Phase point `p…,q…,e,t`; the origin when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
    },
    /// Integrate Hamilton's equations and emit one record per step.
    Integrate {
        /// One of: free, uniform-force, harmonic, generators.
        #[arg(long)]
        hamiltonian: String,
        /// Initial point `p…,q…,e,t`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        z0: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        v: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        r: f64,
    },
    /// Built-in scenarios: boost, accelerating-frame.
    Demo {
        name: String,
        /// Frame velocity.
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        v: f64,
        /// Frame force (accelerating-frame only).
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        f: f64,
        #[arg(long, default_value_t = 2.0)]
        t1: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Sample an element document of the given kind with `--seed`.
    Random {
        /// One of: hamilton, heisenberg, euclidean, hsp.
        kind: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

pub const DEMO_NAMES: &str = "boost, accelerating-frame";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Malformed(_) => CliError::Usage(e.to_string()),
            DocumentError::Invalid(g) => g.into(),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Unknown { .. } => CliError::Usage(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Diagnostics go to `stderr`.
pub fn run_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match run(&cli) {
        Ok(bytes) => match &cli.out {
            Some(path) => match fs::write(path, &bytes) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    2
                }
            },
            None => match stdout.write_all(&bytes) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    2
                }
            },
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

/// Runs a parsed command and returns the bytes to emit.
pub fn run(cli: &Cli) -> CliResult<Vec<u8>> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Compose { lhs, rhs } => {
            let a = read_element(lhs, cli.tol)?;
            let b = read_element(rhs, cli.tol)?;
            if a.kind() != b.kind() {
                return Err(CliError::Domain(format!(
                    "kind mismatch: {} vs {}",
                    a.kind().name(),
                    b.kind().name()
                )));
            }
            if a.dim() != b.dim() {
                return Err(CliError::Domain(format!("dimension mismatch: n={} vs n={}", a.dim(), b.dim())));
            }
            Ok(line(&a.compose(&b)?.to_document()))
        }
        Command::Invert { file } => Ok(line(&read_element(file, cli.tol)?.inverse().to_document())),
        Command::Classify { file } => {
            let doc = MatrixDocument::parse(&read_text(file)?)?;
            let m = doc.to_matrix()?;
            if m.nrows() < 4 || m.nrows() % 2 != 0 {
                return Err(CliError::Usage(format!(
                    "matrix size {} is not of the form 2n+2 with n >= 1",
                    m.nrows()
                )));
            }
            Ok(line(&classification_json(&classify(&m, cli.tol)?)))
        }
        Command::Check { file } => {
            let element = read_element(file, cli.tol)?;
            let n = element.dim();
            let m = element.to_phase_matrix();
            let time = invariance_residual(&m, &QuadraticForm::phase(FormRole::Time, n)?)?;
            let symplectic = invariance_residual(&m, &QuadraticForm::phase(FormRole::Symplectic, n)?)?;
            let length = invariance_residual(&m, &QuadraticForm::phase(FormRole::Length, n)?)?;
            let passed = time <= cli.tol && symplectic <= cli.tol;
            let report = json!({
                "kind": element.kind(),
                "n": n,
                "residuals": { "time": time, "symplectic": symplectic, "length": length },
                "tol": cli.tol,
                "passed": passed,
            });
            if passed {
                Ok(line(&report))
            } else {
                Err(CliError::Domain(format!("element fails form invariance: {report}")))
            }
        }
        Command::Jacobian { v, f, r, at } => {
            if v.is_empty() || v.len() != f.len() {
                return Err(CliError::Usage(format!(
                    "--v and --f must have the same nonzero length (got {} and {})",
                    v.len(),
                    f.len()
                )));
            }
            let n = v.len();
            let z = match at {
                Some(values) => point(values, Some(n))?,
                None => PhasePoint::origin(n)?,
            };
            let (vv, fv) = (DVector::from_column_slice(v), DVector::from_column_slice(f));
            let phi = FrameTransformation::from_generators(&vv, &fv, *r)?;
            let jac = jacobian(&phi, &z, FD_STEP)?;
            let class = classify(&jac, cli.tol)?;
            let error = match &class.params {
                ClassParams::Hamilton(g) => Some(
                    max_abs_vec(&(g.v() - &vv))
                        .max(max_abs_vec(&(g.f() - &fv)))
                        .max((g.r() - r).abs()),
                ),
                _ => None,
            };
            let report = json!({
                "n": n,
                "at": z.to_vector().iter().copied().collect::<Vec<_>>(),
                "jacobian": MatrixDocument::from_matrix(&jac),
                "classification": classification_json(&class),
                "generator_error": error,
            });
            if matches!(class.params, ClassParams::Hamilton(_)) {
                Ok(line(&report))
            } else {
                Err(CliError::Domain(format!("jacobian is not a Hamilton element: {report}")))
            }
        }
        Command::Integrate {
            hamiltonian,
            z0,
            t1,
            steps,
            v,
            f,
            r,
        } => {
            let builtin = BuiltinHamiltonian::parse(hamiltonian)?;
            let z0 = point(z0, None)?;
            let n = z0.dim();
            if *steps == 0 {
                return Err(CliError::Usage("--steps must be at least 1".into()));
            }
            let list = |x: &Option<Vec<f64>>| {
                x.as_ref()
                    .map_or_else(|| DVector::zeros(n), |x| DVector::from_column_slice(x))
            };
            let (vv, fv) = (list(v), list(f));
            if vv.len() != n || fv.len() != n {
                return Err(CliError::Usage(format!("--v and --f must have length {n} to match --z0")));
            }
            let field = builtin.build(n, &vv, &fv, *r)?;
            let traj = integrate(field.as_ref(), &z0, *t1, *steps)?;
            let mut buf = Vec::new();
            write_trajectory(&traj, &mut buf).expect("writing to memory");
            Ok(buf)
        }
        Command::Demo { name, v, f, t1, steps } => match name.as_str() {
            "boost" => {
                let rest = PhasePoint::origin(1)?;
                let traj = integrate(&FreeParticle { n: 1 }, &rest, *t1, *steps)?;
                let phi = FrameTransformation::from_generators(
                    &DVector::from_element(1, *v),
                    &DVector::zeros(1),
                    0.0,
                )?;
                let moved = transform_trajectory(&phi, &traj)?;
                let mut buf = Vec::new();
                write_trajectory(&moved, &mut buf).expect("writing to memory");
                Ok(buf)
            }
            "accelerating-frame" => {
                let (vv, fv) = (DVector::from_element(1, *v), DVector::from_element(1, *f));
                let r = 0.0;
                let phi = FrameTransformation::from_generators(&vv, &fv, r)?;
                let samples = (0..=*steps)
                    .map(|k| {
                        let t = *t1 * k as f64 / *steps.max(&1) as f64;
                        PhasePoint::from_slices(&[0.0], &[0.0], 0.0, t)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let report = verify_hamilton_equations(&phi, &samples, 1e-6)?;
                let jac = jacobian(&phi, &samples[0], FD_STEP)?;
                let class = classify(&jac, cli.tol)?;
                let out = json!({
                    "v": [*v],
                    "f": [*f],
                    "r": r,
                    "hamiltonian": phi.hamiltonian().name(),
                    "max_residual": report.max_residual,
                    "passed": report.passed,
                    "jacobian": classification_json(&class),
                });
                if report.passed {
                    Ok(line(&out))
                } else {
                    Err(CliError::Domain(format!("Hamilton's equations not satisfied: {out}")))
                }
            }
            other => Err(CliError::Usage(format!(
                "unknown demo '{other}' (expected one of: {DEMO_NAMES})"
            ))),
        },
        Command::Random { kind, n } => {
            let kind = match kind.as_str() {
                "hamilton" => ElementKind::Hamilton,
                "heisenberg" => ElementKind::Heisenberg,
                "euclidean" => ElementKind::Euclidean,
                "hsp" => ElementKind::HSp,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown kind '{other}' (expected one of: {})",
                        DocumentKind::NAMES
                    )))
                }
            };
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let element = Element::try_from(random_element(kind, *n, cli.seed)?)?;
            Ok(line(&element.to_document()))
        }
    }
}

fn line<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut buf = serde_json::to_vec(value).expect("serializable output");
    buf.push(b'\n');
    buf
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_element(path: &Path, tol: f64) -> CliResult<Element> {
    let doc = ElementDocument::parse(&read_text(path)?)?;
    Ok(doc.to_element(tol)?)
}

fn point(values: &[f64], n: Option<usize>) -> CliResult<PhasePoint> {
    let len = values.len();
    if len < 4 || !len.is_multiple_of(2) || n.is_some_and(|n| len != 2 * n + 2) {
        let expected = n.map_or_else(|| "2n+2 values with n >= 1".to_string(), |n| format!("{} values", 2 * n + 2));
        return Err(CliError::Usage(format!("phase point has {len} values, expected {expected}")));
    }
    Ok(PhasePoint::from_vector(&DVector::from_column_slice(values))?)
}

fn classification_json(c: &Classification) -> Value {
    let params = match &c.params {
        ClassParams::Hamilton(g) => serde_json::to_value(Element::Hamilton(g.clone()).to_document()),
        ClassParams::HSp(g) => serde_json::to_value(Element::HSp(g.clone()).to_document()),
        ClassParams::InhomGl { epsilon } => Ok(json!({ "epsilon": epsilon.as_i8() })),
        ClassParams::None => Ok(Value::Null),
    }
    .expect("serializable params");
    json!({
        "verdict": c.verdict,
        "n": c.n,
        "params": params,
        "residuals": c.residuals,
        "rest_frame": c.rest_frame,
    })
}

