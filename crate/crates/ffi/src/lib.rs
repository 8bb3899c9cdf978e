//! C ABI over `tworay`.
//!
//! Systems live behind the opaque `TworaySystem` handle. Every call returns a
//! `TworayStatus`; on failure `tworay_last_error` describes what went wrong on
//! the calling thread. Strings handed out by the library are NUL-terminated
//! JSON and must be released with `tworay_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::{json, Value};
use tworay::algebra::lemmas::{verify_lemmas, LemmaId};
use tworay::census::census;
use tworay::correspondence::{admissible_lemma, derive_structure, extend_ds};
use tworay::error::Error;
use tworay::quiver::{BoundQuiver, Vertex};
use tworay::system::DefiningSystem;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TworayStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, a malformed system shape, or bad index syntax.
    Parse = 3,
    /// The system violates a defining-system constraint.
    Invalid = 4,
    Domain = 5,
    Inadmissible = 6,
    Precondition = 7,
    /// A check ran and found a mismatch, or was skipped over budget.
    VerificationFailed = 8,
    Internal = 9,
    Panic = 10,
}

/// A validated defining system.
pub struct TworaySystem(DefiningSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(TworayStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match &e {
            Error::Parse { .. } | Error::Shape(_) | Error::IndexSyntax(_) => TworayStatus::Parse,
            Error::Invalid(_) => TworayStatus::Invalid,
            Error::Domain(..) => TworayStatus::Domain,
            Error::Inadmissible { .. } => TworayStatus::Inadmissible,
            Error::Precondition(_) => TworayStatus::Precondition,
            Error::RelationViolated { .. } | Error::Structure(_) | Error::Unreachable(_) | Error::Internal(_) => {
                TworayStatus::Internal
            }
        };
        Fail(status, e.to_string())
    }
}

fn set_last_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("NULs replaced"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TworayStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (TworayStatus::Ok, None),
        Ok(Err(Fail(s, m))) => (s, Some(m)),
        Err(p) => {
            let m = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            (TworayStatus::Panic, Some(m))
        }
    };
    set_last_error(msg);
    status
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(TworayStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(TworayStatus::InvalidUtf8, e.to_string()))
}

unsafe fn system<'a>(sys: *const TworaySystem) -> Result<&'a DefiningSystem, Fail> {
    sys.as_ref().map(|s| &s.0).ok_or_else(|| Fail(TworayStatus::NullPointer, "null system handle".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(TworayStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).expect("JSON has no NUL").into_raw();
}

unsafe fn put_json(out: *mut *mut c_char, v: &Value) {
    put_string(out, v.to_string());
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn tworay_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn tworay_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tworay_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates `{"p": .., "q": .., "S": .., "T": ..}`.
///
/// # Safety
/// `json` must be NULL or NUL-terminated; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_system_from_json(json: *const c_char, out: *mut *mut TworaySystem) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        let ds = DefiningSystem::from_json(text(json)?)?;
        *out = Box::into_raw(Box::new(TworaySystem(ds)));
        Ok(())
    })
}

/// # Safety
/// `sys` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tworay_system_free(sys: *mut TworaySystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_system_to_json(sys: *const TworaySystem, out: *mut *mut c_char) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, system(sys)?.to_json());
        Ok(())
    })
}

/// Writes the validation report for `json` to `out`. Returns `Invalid` when
/// a constraint fails; the report is written either way.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_validate_json(json: *const c_char, out: *mut *mut c_char) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        let ds = DefiningSystem::from_json_unchecked(text(json)?)?;
        let report = ds.validate();
        put_json(out, &json!(report));
        if report.ok {
            Ok(())
        } else {
            Err(Fail(TworayStatus::Invalid, report.to_string()))
        }
    })
}

/// # Safety
/// `sys` must be a live handle; each count pointer must be writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_quiver_counts(
    sys: *const TworaySystem,
    vertices: *mut usize,
    arrows: *mut usize,
    relations: *mut usize,
) -> TworayStatus {
    guard(|| {
        check_out(vertices)?;
        check_out(arrows)?;
        check_out(relations)?;
        let bq = BoundQuiver::build(system(sys)?);
        *vertices = bq.vertices().len();
        *arrows = bq.arrows().len();
        *relations = bq.relations().len();
        Ok(())
    })
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_quiver_json(sys: *const TworaySystem, out: *mut *mut c_char) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        put_json(out, &BoundQuiver::build(system(sys)?).to_json_value());
        Ok(())
    })
}

/// The derived structure and its axiom report. Returns `VerificationFailed`
/// if an axiom fails; the JSON is written either way.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_structure_json(sys: *const TworaySystem, out: *mut *mut c_char) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        let d = derive_structure(system(sys)?);
        let report = d.cs.check_axioms();
        let cs = d.cs.map_indices(|v| v.cli_name());
        put_json(out, &json!({"structure": cs.to_json_value(), "axioms": report.to_json_value()}));
        if report.all_pass() {
            Ok(())
        } else {
            Err(Fail(TworayStatus::VerificationFailed, report.to_string()))
        }
    })
}

/// Admissible indices as a JSON array of `x:i:j` / `z:i:j` names.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_admissible_json(sys: *const TworaySystem, out: *mut *mut c_char) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        let names: Vec<String> = admissible_lemma(system(sys)?).iter().map(Vertex::cli_name).collect();
        put_json(out, &json!(names));
        Ok(())
    })
}

/// Extends by the admissible index `index` into a new handle.
///
/// # Safety
/// `sys` must be a live handle; `index` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_extend(
    sys: *const TworaySystem,
    index: *const c_char,
    out: *mut *mut TworaySystem,
) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        let y: Vertex = text(index)?.parse()?;
        let step = extend_ds(system(sys)?, y)?;
        *out = Box::into_raw(Box::new(TworaySystem(step.system)));
        Ok(())
    })
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_census_json(sys: *const TworaySystem, out: *mut *mut c_char) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        put_json(out, &census(system(sys)?)?.to_json_value());
        Ok(())
    })
}

/// Runs every homological check up to algebra dimension `budget`. Returns
/// `VerificationFailed` on a mismatch or when the system is over budget; the
/// report is written either way.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tworay_verify_json(
    sys: *const TworaySystem,
    budget: usize,
    out: *mut *mut c_char,
) -> TworayStatus {
    guard(|| {
        check_out(out)?;
        let report = verify_lemmas(system(sys)?, &LemmaId::ALL, budget)?;
        put_json(out, &json!(report));
        if report.skipped {
            Err(Fail(TworayStatus::VerificationFailed, format!("algebra dimension {} exceeds budget {budget}", report.algebra_dim)))
        } else if !report.ok() {
            Err(Fail(TworayStatus::VerificationFailed, format!("{} mismatches", report.mismatches.len())))
        } else {
            Ok(())
        }
    })
}
