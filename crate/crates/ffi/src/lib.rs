//! C ABI for the curvchern engine.
//!
//! Inputs are opaque handles built from JSON manifests. Every fallible call
//! returns a [`CurvchernStatus`]; on failure the message is available from
//! [`curvchern_last_error`] on the same thread. Strings handed out by the
//! library must be released with [`curvchern_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use curvchern::algebra::DescriptorError;
use curvchern::chern::{chern_direct, chern_finite, chern_oracle, compare, ChernError, ChernInput};
use curvchern::hochschild::TruncationCaps;
use curvchern::manifest::{Manifest, ManifestError};
use curvchern::nonunital::IotaReading;
use curvchern::report::ReportDocument;

/// Result codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvchernStatus {
    Ok = 0,
    /// a conclusive identity check failed (output is still produced)
    CheckFailed = 1,
    ParseError = 2,
    PreconditionFailed = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    /// the engine panicked; the handle should not be reused
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvchernMethod {
    Direct = 0,
    Oracle = 1,
    Finite = 2,
}

/// Opaque validated input `(A, N, α, π)` with truncation caps.
pub struct CurvchernInput {
    inner: ChernInput,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(CurvchernStatus, String);

impl From<ManifestError> for Failure {
    fn from(e: ManifestError) -> Self {
        let status = if e.is_parse_error() {
            CurvchernStatus::ParseError
        } else {
            CurvchernStatus::PreconditionFailed
        };
        Failure(status, e.to_string())
    }
}

impl From<ChernError> for Failure {
    fn from(e: ChernError) -> Self {
        Failure(CurvchernStatus::PreconditionFailed, e.to_string())
    }
}

/// Runs `body`, converting failures and panics into a status.
fn guard(body: impl FnOnce() -> Result<CurvchernStatus, Failure>) -> CurvchernStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error");
            CurvchernStatus::Internal
        }
    }
}

/// # Safety
/// `s` must be null or a NUL-terminated string valid for reads.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(
            CurvchernStatus::NullArgument,
            "null string argument".into(),
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(CurvchernStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            CurvchernStatus::NullArgument,
            "null output pointer".into(),
        ));
    }
    let c = CString::new(text)
        .map_err(|_| Failure(CurvchernStatus::Internal, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// # Safety
/// `input` must be null or a live handle from this library.
unsafe fn handle<'a>(input: *const CurvchernInput) -> Result<&'a ChernInput, Failure> {
    input
        .as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Failure(CurvchernStatus::NullArgument, "null input handle".into()))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn curvchern_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn curvchern_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a JSON manifest into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn curvchern_input_from_json(
    json: *const c_char,
    out: *mut *mut CurvchernInput,
) -> CurvchernStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(
                CurvchernStatus::NullArgument,
                "null output pointer".into(),
            ));
        }
        let inner = Manifest::parse(read_str(json)?)?.build()?;
        *out = Box::into_raw(Box::new(CurvchernInput { inner }));
        Ok(CurvchernStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `input` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn curvchern_input_free(input: *mut CurvchernInput) {
    if !input.is_null() {
        drop(Box::from_raw(input));
    }
}

/// Replaces the truncation caps of a handle.
///
/// # Safety
/// `input` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn curvchern_input_set_caps(
    input: *mut CurvchernInput,
    u_order: u32,
    max_length: usize,
) -> CurvchernStatus {
    guard(|| {
        let h = input
            .as_mut()
            .ok_or_else(|| Failure(CurvchernStatus::NullArgument, "null input handle".into()))?;
        h.inner = h.inner.with_caps(TruncationCaps::new(u_order, max_length));
        Ok(CurvchernStatus::Ok)
    })
}

/// Rank of the free module `N`.
///
/// # Safety
/// `input` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn curvchern_input_rank(input: *const CurvchernInput) -> usize {
    input.as_ref().map_or(0, |h| h.inner.size())
}

/// Checks a manifest; on `CHECK_FAILED` the violations (with witnesses) are
/// written to `out`, on `OK` a one-line summary.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn curvchern_validate_json(
    json: *const c_char,
    out: *mut *mut c_char,
) -> CurvchernStatus {
    guard(|| {
        let m = Manifest::parse(read_str(json)?)?;
        match m.algebra() {
            Err(ManifestError::Descriptor(DescriptorError::Invalid(v))) => {
                write_string(out, v.to_string())?;
                return Ok(CurvchernStatus::CheckFailed);
            }
            Err(e) => return Err(e.into()),
            Ok(_) => {}
        }
        match m.build() {
            Ok(input) => {
                write_string(out, format!("valid: module rank {}", input.size()))?;
                Ok(CurvchernStatus::Ok)
            }
            Err(e) if e.is_parse_error() => Err(e.into()),
            Err(e) => {
                write_string(out, e.to_string())?;
                Ok(CurvchernStatus::CheckFailed)
            }
        }
    })
}

/// Computes the Chern character and writes its JSON report document to
/// `out`. With `verify` false the certification report is omitted.
///
/// # Safety
/// `input` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn curvchern_chern_json(
    input: *const CurvchernInput,
    method: CurvchernMethod,
    verify: bool,
    out: *mut *mut c_char,
) -> CurvchernStatus {
    guard(|| {
        let input = handle(input)?;
        let result = match method {
            CurvchernMethod::Direct => chern_direct(input),
            CurvchernMethod::Oracle => chern_oracle(input, IotaReading::Literal),
            CurvchernMethod::Finite => chern_finite(input),
        }?;
        let doc = ReportDocument::new(&result, verify);
        write_string(out, doc.to_json())?;
        Ok(if doc.passed() {
            CurvchernStatus::Ok
        } else {
            CurvchernStatus::CheckFailed
        })
    })
}

/// Compares the closed formula with the categorical oracle. Returns
/// `CHECK_FAILED` with the first differing stratum as the last error.
/// `checked` (optional) receives the number of conclusive strata.
///
/// # Safety
/// `input` must be a live handle; `checked` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn curvchern_compare(
    input: *const CurvchernInput,
    checked: *mut usize,
) -> CurvchernStatus {
    guard(|| {
        let input = handle(input)?;
        let direct = chern_direct(input)?.chain;
        let oracle = chern_oracle(input, IotaReading::Literal)?.chain;
        let cmp = compare(&direct, &oracle);
        if !checked.is_null() {
            *checked = cmp.checked;
        }
        match cmp.first {
            Some((k, len, diff)) => Err(Failure(
                CurvchernStatus::CheckFailed,
                format!("differ at stratum u^{k}, length {len}: {diff}"),
            )),
            None => Ok(CurvchernStatus::Ok),
        }
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn curvchern_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
