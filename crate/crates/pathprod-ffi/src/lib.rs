//! C API for the pathprod engine.
//!
//! Conventions, mirroring the CLI's exit codes:
//!
//! * Every fallible call returns a [`PathprodStatus`]: `OK` (0) when all
//!   checks passed, `CHECK_FAILED` (1) when a mathematical property check
//!   failed (the report JSON names the failing line), `INVALID_INPUT` (2)
//!   for unusable arguments, unreadable catalogs or out-of-window
//!   requests, and `INTERNAL_PANIC` (3) if the engine panicked (a bug).
//! * On status 2 or 3 a thread-local message is available through
//!   [`pathprod_last_error`]; it stays valid until the next API call on
//!   the same thread.
//! * Catalogs are opaque handles created by [`pathprod_catalog_builtin`]
//!   or [`pathprod_catalog_open`] and released by
//!   [`pathprod_catalog_free`].
//! * Result payloads are UTF-8 JSON strings allocated by this library;
//!   release them with [`pathprod_string_free`]. A single report is an
//!   object, multiple reports form an array — byte-for-byte the CLI's
//!   `--json` output.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pathprod::{
    build_sun_scenario, distinguish_module_structures, run_entry_checks, verify_counterexample,
    Catalog, EmbeddingKind, EngineError, Report,
};

/// Status code returned by every fallible function in this API.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathprodStatus {
    /// The call succeeded and every property check passed.
    Ok = 0,
    /// The call succeeded but a property check failed; inspect the JSON.
    CheckFailed = 1,
    /// The input was unusable; see `pathprod_last_error`.
    InvalidInput = 2,
    /// The engine panicked; see `pathprod_last_error` and report a bug.
    InternalPanic = 3,
}

/// Opaque handle to a loaded model catalog.
pub struct PathprodCatalog {
    inner: Catalog,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL bytes removed");
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::default();
    });
}

/// Run a closure behind a panic guard, translating panics to status 3.
fn guarded<F: FnOnce() -> PathprodStatus>(f: F) -> PathprodStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(&format!("internal panic: {msg}"));
            PathprodStatus::InternalPanic
        }
    }
}

/// Serialize reports exactly like the CLI: one report unwrapped, several
/// as an array.
fn reports_to_json(reports: &[Report]) -> String {
    let values: Vec<serde_json::Value> = reports.iter().map(Report::to_json).collect();
    let payload = if values.len() == 1 {
        values.into_iter().next().expect("one report")
    } else {
        serde_json::Value::Array(values)
    };
    serde_json::to_string_pretty(&payload).expect("report serialization")
}

/// Hand a heap JSON string to the caller through `out_json`.
///
/// # Safety
/// `out_json` must be a valid, writable pointer.
unsafe fn emit(out_json: *mut *mut c_char, reports: &[Report]) -> PathprodStatus {
    let json = reports_to_json(reports);
    *out_json = CString::new(json)
        .expect("engine JSON never contains NUL")
        .into_raw();
    if reports.iter().all(Report::passed) {
        PathprodStatus::Ok
    } else {
        PathprodStatus::CheckFailed
    }
}

/// Read a required, NUL-terminated UTF-8 argument.
///
/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PathprodStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} is a null pointer"));
        return Err(PathprodStatus::InvalidInput);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        PathprodStatus::InvalidInput
    })
}

fn engine_error(e: &EngineError) -> PathprodStatus {
    set_error(&e.to_string());
    PathprodStatus::InvalidInput
}

/// The library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn pathprod_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the last failure on this thread, as a NUL-terminated
/// UTF-8 string owned by the library. Empty when the last call succeeded.
/// The pointer stays valid until the next API call on the same thread.
#[no_mangle]
pub extern "C" fn pathprod_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Load the built-in catalog with the given degree window. Returns null
/// on failure (see `pathprod_last_error`).
#[no_mangle]
pub extern "C" fn pathprod_catalog_builtin(max_degree: i64) -> *mut PathprodCatalog {
    clear_error();
    let mut out = ptr::null_mut();
    guarded(|| match Catalog::builtin(max_degree) {
        Ok(inner) => {
            out = Box::into_raw(Box::new(PathprodCatalog { inner }));
            PathprodStatus::Ok
        }
        Err(e) => engine_error(&e),
    });
    out
}

/// Load a catalog from a JSON file with the given degree window. Returns
/// null on failure (see `pathprod_last_error`).
///
/// # Safety
/// `path` must be a valid NUL-terminated string (or null, which fails
/// cleanly).
#[no_mangle]
pub unsafe extern "C" fn pathprod_catalog_open(
    path: *const c_char,
    max_degree: i64,
) -> *mut PathprodCatalog {
    clear_error();
    let mut out = ptr::null_mut();
    guarded(|| {
        let path = match required_str(path, "catalog path") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match Catalog::load_path(Path::new(path), max_degree) {
            Ok(inner) => {
                out = Box::into_raw(Box::new(PathprodCatalog { inner }));
                PathprodStatus::Ok
            }
            Err(e) => engine_error(&e),
        }
    });
    out
}

/// Release a catalog handle. Null is ignored; a handle must not be used
/// after this call.
///
/// # Safety
/// `catalog` must be null or a pointer returned by a catalog constructor
/// of this library that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn pathprod_catalog_free(catalog: *mut PathprodCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Number of entries in the catalog; 0 for a null handle.
///
/// # Safety
/// `catalog` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pathprod_catalog_entry_count(catalog: *const PathprodCatalog) -> usize {
    if catalog.is_null() {
        return 0;
    }
    (*catalog).inner.entries().len()
}

/// Run the validation suite for a named catalog entry, quantified up to
/// `max_degree`, and store the report JSON in `*out_json`.
///
/// # Safety
/// `catalog` must be a live handle, `model` a valid NUL-terminated
/// string, and `out_json` a writable pointer. The returned string must
/// be released with `pathprod_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pathprod_check(
    catalog: *const PathprodCatalog,
    model: *const c_char,
    max_degree: i64,
    out_json: *mut *mut c_char,
) -> PathprodStatus {
    clear_error();
    guarded(|| {
        let Some(out_json) = prepare_out(out_json) else {
            return PathprodStatus::InvalidInput;
        };
        if catalog.is_null() {
            set_error("catalog is a null pointer");
            return PathprodStatus::InvalidInput;
        }
        let model = match required_str(model, "model name") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match run_entry_checks(&(*catalog).inner, model, max_degree) {
            Ok(reports) => emit(out_json, &reports),
            Err(e) => engine_error(&e),
        }
    })
}

/// Verify the SU(2) ⊂ SU(n) counterexample relations over the catalog's
/// coefficient field and store the report JSON in `*out_json`.
///
/// # Safety
/// Same contract as `pathprod_check`.
#[no_mangle]
pub unsafe extern "C" fn pathprod_counterexample(
    catalog: *const PathprodCatalog,
    n: i64,
    max_degree: i64,
    out_json: *mut *mut c_char,
) -> PathprodStatus {
    clear_error();
    guarded(|| {
        let Some(out_json) = prepare_out(out_json) else {
            return PathprodStatus::InvalidInput;
        };
        if catalog.is_null() {
            set_error("catalog is a null pointer");
            return PathprodStatus::InvalidInput;
        }
        let field = (*catalog).inner.field();
        let scenario = match build_sun_scenario(field, n, EmbeddingKind::Subgroup, max_degree) {
            Ok(s) => s,
            Err(e) => return engine_error(&e),
        };
        match verify_counterexample(&scenario) {
            Ok(report) => emit(out_json, &[report]),
            Err(e) => engine_error(&e),
        }
    })
}

/// Compare the subgroup and null-homotopic module structures on SU(n)
/// over the catalog's coefficient field; the report JSON goes to
/// `*out_json`.
///
/// # Safety
/// Same contract as `pathprod_check`.
#[no_mangle]
pub unsafe extern "C" fn pathprod_distinguish(
    catalog: *const PathprodCatalog,
    n: i64,
    max_degree: i64,
    out_json: *mut *mut c_char,
) -> PathprodStatus {
    clear_error();
    guarded(|| {
        let Some(out_json) = prepare_out(out_json) else {
            return PathprodStatus::InvalidInput;
        };
        if catalog.is_null() {
            set_error("catalog is a null pointer");
            return PathprodStatus::InvalidInput;
        }
        let field = (*catalog).inner.field();
        match distinguish_module_structures(field, n, max_degree) {
            Ok(report) => emit(out_json, &[report]),
            Err(e) => engine_error(&e),
        }
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string pointer produced by this library that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn pathprod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Validate and zero the output slot so callers never see garbage.
///
/// # Safety
/// `out_json` must be null (rejected) or writable.
unsafe fn prepare_out(out_json: *mut *mut c_char) -> Option<*mut *mut c_char> {
    if out_json.is_null() {
        set_error("out_json is a null pointer");
        return None;
    }
    *out_json = ptr::null_mut();
    Some(out_json)
}
