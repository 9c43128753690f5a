//! C ABI over the gauge-color library.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Strings returned through out-parameters are
//! NUL-terminated and released with `gcc_string_free`. Every call returns a
//! [`GccStatus`]; on failure `gcc_last_error_message` describes the error for
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use gauge_color::code::{export_check_matrices, verify_structure, CodeError, GaugeColorCode};
use gauge_color::lattice::{build_closed, validate_complex, ColoredComplex, Family, LatticeError};
use gauge_color::transversal::{gate_plan, TransversalError};

/// Bumped on any incompatible change to the functions or types below.
pub const GCC_ABI_VERSION: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GccStatus {
    Ok = 0,
    NullPointer = -1,
    InvalidParameter = -2,
    VerificationFailed = -3,
    Io = -4,
    InvalidUtf8 = -5,
    Internal = -6,
    Panic = -7,
}

/// A closed colored complex.
pub struct GccLattice {
    inner: Arc<ColoredComplex>,
}

/// A gauge color code on a lattice.
pub struct GccCode {
    inner: GaugeColorCode,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

struct Fail(GccStatus, String);

impl From<LatticeError> for Fail {
    fn from(e: LatticeError) -> Self {
        let status = match e {
            LatticeError::InvalidParameter(_) => GccStatus::InvalidParameter,
            LatticeError::Io(_) => GccStatus::Io,
            _ => GccStatus::VerificationFailed,
        };
        Fail(status, e.to_string())
    }
}

impl From<CodeError> for Fail {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::InvalidParameters(_) => Fail(GccStatus::InvalidParameter, e.to_string()),
            CodeError::Io(_) => Fail(GccStatus::Io, e.to_string()),
            CodeError::Lattice(l) => l.into(),
            _ => Fail(GccStatus::VerificationFailed, e.to_string()),
        }
    }
}

impl From<TransversalError> for Fail {
    fn from(e: TransversalError) -> Self {
        match e {
            TransversalError::DimensionCondition { .. } | TransversalError::InvalidLevel(_) => {
                Fail(GccStatus::InvalidParameter, e.to_string())
            }
            _ => Fail(GccStatus::VerificationFailed, e.to_string()),
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(GccStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GccStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GccStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            GccStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(GccStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(GccStatus::Internal, e.to_string()))?;
    write_out(out, c.into_raw())
}

#[no_mangle]
pub extern "C" fn gcc_abi_version() -> u32 {
    GCC_ABI_VERSION
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `cap > 0`). Returns the full message length in
/// bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn gcc_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds and closes a family lattice. `family` is 2 or 3.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn gcc_lattice_build(family: u32, n: u32, out: *mut *mut GccLattice) -> GccStatus {
    guard(|| {
        let family = match family {
            2 => Family::TwoD,
            3 => Family::ThreeD,
            f => return Err(Fail(GccStatus::InvalidParameter, format!("family must be 2 or 3, got {f}"))),
        };
        let k = build_closed(family, n as usize)?;
        write_out(out, Box::into_raw(Box::new(GccLattice { inner: Arc::new(k) })))
    })
}

/// Parses and validates lattice JSON. Open complexes are rejected.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcc_lattice_from_json(json: *const c_char, out: *mut *mut GccLattice) -> GccStatus {
    guard(|| {
        let k = ColoredComplex::from_json(read_str(json, "json")?)?;
        if !k.is_closed() {
            return Err(LatticeError::NotClosed.into());
        }
        write_out(out, Box::into_raw(Box::new(GccLattice { inner: Arc::new(k) })))
    })
}

/// # Safety
/// `lattice` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcc_lattice_qubit_count(lattice: *const GccLattice, out: *mut usize) -> GccStatus {
    guard(|| write_out(out, as_ref(lattice, "lattice")?.inner.num_qubits()))
}

/// # Safety
/// `lattice` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcc_lattice_to_json(lattice: *const GccLattice, out: *mut *mut c_char) -> GccStatus {
    guard(|| write_string(out, as_ref(lattice, "lattice")?.inner.to_json()?))
}

/// # Safety
/// `lattice` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcc_lattice_free(lattice: *mut GccLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Builds the (d,e) code. The code keeps its own reference to the lattice.
///
/// # Safety
/// `lattice` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcc_code_build(
    lattice: *const GccLattice,
    d: u32,
    e: u32,
    out: *mut *mut GccCode,
) -> GccStatus {
    guard(|| {
        let k = as_ref(lattice, "lattice")?.inner.clone();
        let code = GaugeColorCode::new(k, d as usize, e as usize)?;
        write_out(out, Box::into_raw(Box::new(GccCode { inner: code })))
    })
}

/// # Safety
/// `code` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcc_code_num_qubits(code: *const GccCode, out: *mut usize) -> GccStatus {
    guard(|| write_out(out, as_ref(code, "code")?.inner.num_qubits()))
}

/// # Safety
/// `code` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcc_code_stabilizer_rank(code: *const GccCode, out: *mut usize) -> GccStatus {
    guard(|| write_out(out, as_ref(code, "code")?.inner.stabilizer().rank()))
}

/// # Safety
/// `code` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcc_code_gauge_rank(code: *const GccCode, out: *mut usize) -> GccStatus {
    guard(|| write_out(out, as_ref(code, "code")?.inner.gauge().rank()))
}

/// Runs the lattice and code structure checks. `pass` receives the overall
/// verdict; `report_json`, if not null, receives the report as JSON.
///
/// # Safety
/// `code` must be a live handle; `pass` a valid pointer; `report_json` null
/// or valid.
#[no_mangle]
pub unsafe extern "C" fn gcc_code_verify(
    code: *const GccCode,
    pass: *mut bool,
    report_json: *mut *mut c_char,
) -> GccStatus {
    guard(|| {
        let code = &as_ref(code, "code")?.inner;
        let mut report = validate_complex(code.lattice());
        report.extend("structure.", verify_structure(code));
        write_out(pass, report.all_pass())?;
        if !report_json.is_null() {
            let json = serde_json::to_string(&report).map_err(|e| Fail(GccStatus::Internal, e.to_string()))?;
            write_string(report_json, json)?;
        }
        Ok(())
    })
}

/// Transversal R_level plan as JSON `{n, k, T, exponents}`.
///
/// # Safety
/// `code` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcc_code_gate_plan_json(code: *const GccCode, level: u32, out: *mut *mut c_char) -> GccStatus {
    guard(|| {
        let plan = gate_plan(&as_ref(code, "code")?.inner, level as usize)?;
        write_string(out, plan.to_json())
    })
}

/// Writes stabilizer, gauge and logical check matrices into `dir`.
///
/// # Safety
/// `code` must be a live handle; `dir` a NUL-terminated path.
#[no_mangle]
pub unsafe extern "C" fn gcc_code_export(code: *const GccCode, dir: *const c_char) -> GccStatus {
    guard(|| {
        let code = &as_ref(code, "code")?.inner;
        export_check_matrices(code, Path::new(read_str(dir, "dir")?))?;
        Ok(())
    })
}

/// # Safety
/// `code` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcc_code_free(code: *mut GccCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
