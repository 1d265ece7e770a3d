//! C ABI over `hamilton-group`.
//!
//! Elements of the extended Hamilton group are passed as opaque
//! [`HgHamilton`] handles created by the `hg_hamilton_*` constructors and
//! released with [`hg_hamilton_free`]. Every fallible call returns an
//! [`HgStatus`]; on failure a message is available from
//! [`hg_last_error_message`] on the same thread. Matrices are dense and
//! row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use hamilton_group::group::dim_from_phase_size;
use hamilton_group::invariance::{self, FormRole, QuadraticForm, Space, Verdict};
use hamilton_group::linalg::to_rows;
use hamilton_group::{GroupElement, GroupError, HamiltonElement, Rotation, Sign};
use nalgebra::{DMatrix, DVector};

/// Opaque handle to a Hamilton group element.
pub struct HgHamilton {
    inner: HamiltonElement,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotAMember = 4,
    Singular = 5,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HgVerdict {
    Hamilton = 0,
    Hsp = 1,
    InhomGl = 2,
    GeneralLinear = 3,
    NotAGroupElement = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HgFormRole {
    Time = 0,
    Length = 1,
    Symplectic = 2,
    /// `ζ°` on `(p, q)` only; the matrix is `2n x 2n`.
    SymplecticCore = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

fn status_of(err: &GroupError) -> HgStatus {
    match err {
        GroupError::DimensionMismatch { .. } | GroupError::NotSquare { .. } | GroupError::BadSize(_) => {
            HgStatus::DimensionMismatch
        }
        GroupError::NotOrthogonal { .. } | GroupError::NotSymplectic { .. } | GroupError::Structure { .. } => {
            HgStatus::NotAMember
        }
        GroupError::Singular { .. } => HgStatus::Singular,
        _ => HgStatus::InvalidArgument,
    }
}

fn guard(body: impl FnOnce() -> Result<(), HgStatus>) -> HgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            HgStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            HgStatus::Panic
        }
    }
}

fn fail(err: GroupError) -> HgStatus {
    set_error(err.to_string());
    status_of(&err)
}

fn null(what: &str) -> HgStatus {
    set_error(format!("{what} is null"));
    HgStatus::NullPointer
}

unsafe fn read<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], HgStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn square(data: *const f64, size: usize) -> Result<DMatrix<f64>, HgStatus> {
    let values = read(data, size * size, "matrix")?;
    Ok(DMatrix::from_row_slice(size, size, values))
}

unsafe fn handle<'a>(g: *const HgHamilton, what: &str) -> Result<&'a HamiltonElement, HgStatus> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

unsafe fn emit(out: *mut *mut HgHamilton, g: HamiltonElement) -> Result<(), HgStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(HgHamilton { inner: g }));
    Ok(())
}

/// Builds `Φ(ε, R, f, v, r)`. `rot` holds `n*n` values, `f` and `v` hold `n`.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_new(
    n: usize,
    epsilon: i32,
    rot: *const f64,
    f: *const f64,
    v: *const f64,
    r: f64,
    out: *mut *mut HgHamilton,
) -> HgStatus {
    guard(|| {
        if n == 0 {
            return Err(fail(GroupError::ZeroDimension));
        }
        let sign = Sign::from_f64(f64::from(epsilon)).map_err(fail)?;
        let rot = Rotation::new(square(rot, n)?).map_err(fail)?;
        let f = DVector::from_column_slice(read(f, n, "f")?);
        let v = DVector::from_column_slice(read(v, n, "v")?);
        emit(out, HamiltonElement::new(sign, rot, f, v, r).map_err(fail)?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_identity(n: usize, out: *mut *mut HgHamilton) -> HgStatus {
    guard(|| emit(out, HamiltonElement::identity(n).map_err(fail)?))
}

/// `lhs · rhs`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_compose(
    lhs: *const HgHamilton,
    rhs: *const HgHamilton,
    out: *mut *mut HgHamilton,
) -> HgStatus {
    guard(|| {
        let g = handle(lhs, "lhs")?.compose(handle(rhs, "rhs")?).map_err(fail)?;
        emit(out, g)
    })
}

/// # Safety
/// `g` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_inverse(g: *const HgHamilton, out: *mut *mut HgHamilton) -> HgStatus {
    guard(|| emit(out, handle(g, "g")?.inverse()))
}

/// Spatial dimension `n`, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_dim(g: *const HgHamilton) -> usize {
    g.as_ref().map_or(0, |h| h.inner.dim())
}

/// Writes the `(2n+2) x (2n+2)` matrix; `len` must equal `(2n+2)^2`.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_to_matrix(g: *const HgHamilton, out: *mut f64, len: usize) -> HgStatus {
    guard(|| {
        let m = handle(g, "g")?.to_matrix();
        if len != m.len() {
            return Err(fail(GroupError::DimensionMismatch {
                expected: m.len(),
                found: len,
            }));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let dst = slice::from_raw_parts_mut(out, len);
        for (k, row) in to_rows(&m).into_iter().enumerate() {
            dst[k * m.ncols()..(k + 1) * m.ncols()].copy_from_slice(&row);
        }
        Ok(())
    })
}

/// Parses a `size x size` row-major matrix as a Hamilton element.
///
/// # Safety
/// `data` must hold `size*size` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_from_matrix(
    data: *const f64,
    size: usize,
    tol: f64,
    out: *mut *mut HgHamilton,
) -> HgStatus {
    guard(|| {
        let m = square(data, size)?;
        emit(out, HamiltonElement::from_matrix(&m, tol).map_err(fail)?)
    })
}

/// Copies the parameters out. Any output pointer may be null to skip it;
/// `rot` takes `n*n` values, `f` and `v` take `n`.
///
/// # Safety
/// Non-null outputs must be writable for their lengths.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_params(
    g: *const HgHamilton,
    epsilon: *mut i32,
    rot: *mut f64,
    f: *mut f64,
    v: *mut f64,
    r: *mut f64,
) -> HgStatus {
    guard(|| {
        let g = handle(g, "g")?;
        let n = g.dim();
        if let Some(e) = epsilon.as_mut() {
            *e = i32::from(g.epsilon().as_i8());
        }
        if !rot.is_null() {
            let dst = slice::from_raw_parts_mut(rot, n * n);
            for i in 0..n {
                for j in 0..n {
                    dst[i * n + j] = g.rotation().matrix()[(i, j)];
                }
            }
        }
        if !f.is_null() {
            slice::from_raw_parts_mut(f, n).copy_from_slice(g.f().as_slice());
        }
        if !v.is_null() {
            slice::from_raw_parts_mut(v, n).copy_from_slice(g.v().as_slice());
        }
        if let Some(r) = r.as_mut() {
            *r = g.r();
        }
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hg_hamilton_free(g: *mut HgHamilton) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Classifies a `size x size` row-major matrix, `size = 2n + 2`.
///
/// # Safety
/// `data` must hold `size*size` doubles; `verdict` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_classify(data: *const f64, size: usize, tol: f64, verdict: *mut HgVerdict) -> HgStatus {
    guard(|| {
        let m = square(data, size)?;
        let c = invariance::classify(&m, tol).map_err(fail)?;
        let out = verdict.as_mut().ok_or_else(|| null("verdict"))?;
        *out = match c.verdict {
            Verdict::Hamilton => HgVerdict::Hamilton,
            Verdict::HSp => HgVerdict::Hsp,
            Verdict::InhomGl => HgVerdict::InhomGl,
            Verdict::GeneralLinear => HgVerdict::GeneralLinear,
            Verdict::NotAGroupElement => HgVerdict::NotAGroupElement,
        };
        Ok(())
    })
}

/// `max |ᵗM·G·M - G|` for the phase-space form `role`.
///
/// # Safety
/// `data` must hold `size*size` doubles; `residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_form_residual(
    data: *const f64,
    size: usize,
    role: HgFormRole,
    residual: *mut f64,
) -> HgStatus {
    guard(|| {
        let m = square(data, size)?;
        let (role, n) = match role {
            HgFormRole::SymplecticCore => {
                if size == 0 || !size.is_multiple_of(2) {
                    return Err(fail(GroupError::BadSize(size)));
                }
                (FormRole::SymplecticCore, size / 2)
            }
            other => {
                let n = dim_from_phase_size(size).map_err(fail)?;
                let role = match other {
                    HgFormRole::Time => FormRole::Time,
                    HgFormRole::Length => FormRole::Length,
                    _ => FormRole::Symplectic,
                };
                (role, n)
            }
        };
        let form = QuadraticForm::build(role, Space::Phase, n).map_err(fail)?;
        let value = invariance::invariance_residual(&m, &form).map_err(fail)?;
        *residual.as_mut().ok_or_else(|| null("residual"))? = value;
        Ok(())
    })
}

/// Message for the most recent failure on this thread; empty after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

