//! C ABI for the T-category engine: opaque handles over the core types,
//! status codes mirroring the CLI's exit codes, and JSON strings as the
//! exchange format. The header is generated by cbindgen into
//! `include/tcat.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use tcat_core::cat::{validate_category, validate_functor, CatError, TCategory, TFunctor};
use tcat_core::factor::{
    check_orthogonal, factorize, is_perfect, street_walters_oracle, FactorError,
    FactorizationResult,
};
use tcat_core::json::{
    category_from_str, category_to_string, functor_from_str, functor_to_string,
};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum TcatStatus {
    /// success; for predicates, "true"
    TcatOk = 0,
    /// a validation failed or a predicate is "false"
    TcatInvalid = 1,
    /// malformed input: bad JSON, bad schema, or structural errors
    TcatSchemaError = 2,
    /// an enumeration cap was exceeded
    TcatCapExceeded = 3,
    /// a required pointer argument was null
    TcatNullPointer = 4,
    /// the operation is unavailable for the input's monad
    TcatWrongMonad = 5,
    /// an internal invariant failed
    TcatInternal = 6,
}

use TcatStatus::*;

/// Opaque handle to a validated-structure category.
pub struct TcatCategory(Arc<TCategory>);

/// Opaque handle to a functor between owned categories.
pub struct TcatFunctor(TFunctor);

/// Opaque handle to a factorization result.
pub struct TcatFactorization(FactorizationResult);

fn cat_error_status(e: &CatError) -> TcatStatus {
    match e {
        CatError::CapExceeded { .. } => TcatCapExceeded,
        _ => TcatSchemaError,
    }
}

fn factor_error_status(e: &FactorError) -> TcatStatus {
    match e {
        FactorError::Cat(inner) => cat_error_status(inner),
        FactorError::WrongMonad => TcatWrongMonad,
        FactorError::HypothesisViolation(_) => TcatInvalid,
        _ => TcatSchemaError,
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, TcatStatus> {
    if ptr.is_null() {
        return Err(TcatNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| TcatSchemaError)
}

fn export_string(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => ptr::null_mut(),
    }
}

fn guarded(body: impl FnOnce() -> TcatStatus) -> TcatStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(TcatInternal)
}

/// Free a string returned by any `*_json` or `*_report` function.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn tcat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a category from JSON.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcat_category_parse(
    json: *const c_char,
    out: *mut *mut TcatCategory,
) -> TcatStatus {
    if out.is_null() {
        return TcatNullPointer;
    }
    let text = match read_utf8(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| match category_from_str(text) {
        Ok(cat) => {
            *out = Box::into_raw(Box::new(TcatCategory(Arc::new(cat))));
            TcatOk
        }
        Err(_) => TcatSchemaError,
    })
}

/// # Safety
/// `cat` must be a handle from `tcat_category_parse`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn tcat_category_free(cat: *mut TcatCategory) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Serialize a category back to JSON. Returns NULL on null input.
///
/// # Safety
/// `cat` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcat_category_to_json(cat: *const TcatCategory) -> *mut c_char {
    if cat.is_null() {
        return ptr::null_mut();
    }
    export_string(category_to_string(&(*cat).0))
}

/// Check the category axioms. Returns Ok when all pass, Invalid otherwise;
/// when `report_out` is non-null it receives the human-readable report.
///
/// # Safety
/// `cat` must be a live handle; `report_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn tcat_category_validate(
    cat: *const TcatCategory,
    audit: bool,
    report_out: *mut *mut c_char,
) -> TcatStatus {
    if cat.is_null() {
        return TcatNullPointer;
    }
    guarded(|| match validate_category(&(*cat).0, audit) {
        Ok(report) => {
            if !report_out.is_null() {
                *report_out = export_string(report.to_string());
            }
            if report.passed() {
                TcatOk
            } else {
                TcatInvalid
            }
        }
        Err(e) => cat_error_status(&e),
    })
}

/// Parse a functor (with embedded categories) from JSON.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcat_functor_parse(
    json: *const c_char,
    out: *mut *mut TcatFunctor,
) -> TcatStatus {
    if out.is_null() {
        return TcatNullPointer;
    }
    let text = match read_utf8(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| match functor_from_str(text) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(TcatFunctor(f)));
            TcatOk
        }
        Err(_) => TcatSchemaError,
    })
}

/// # Safety
/// `f` must be a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn tcat_functor_free(f: *mut TcatFunctor) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcat_functor_to_json(f: *const TcatFunctor) -> *mut c_char {
    if f.is_null() {
        return ptr::null_mut();
    }
    export_string(functor_to_string(&(*f).0))
}

/// Check the functor conditions; same contract as category validation.
///
/// # Safety
/// `f` must be a live handle; `report_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn tcat_functor_validate(
    f: *const TcatFunctor,
    audit: bool,
    report_out: *mut *mut c_char,
) -> TcatStatus {
    if f.is_null() {
        return TcatNullPointer;
    }
    guarded(|| match validate_functor(&(*f).0, audit) {
        Ok(report) => {
            if !report_out.is_null() {
                *report_out = export_string(report.to_string());
            }
            if report.passed() {
                TcatOk
            } else {
                TcatInvalid
            }
        }
        Err(e) => cat_error_status(&e),
    })
}

/// Decide perfectness. `result_out` receives the verdict.
///
/// # Safety
/// `f` must be a live handle; `result_out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcat_functor_is_perfect(
    f: *const TcatFunctor,
    result_out: *mut bool,
) -> TcatStatus {
    if f.is_null() || result_out.is_null() {
        return TcatNullPointer;
    }
    guarded(|| match is_perfect(&(*f).0) {
        Ok(answer) => {
            *result_out = answer;
            TcatOk
        }
        Err(e) => cat_error_status(&e),
    })
}

/// Factor a functor into a unit followed by a perfect functor. With
/// `audit`, codomain well-definedness is re-checked over every lift.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcat_factorize(
    f: *const TcatFunctor,
    audit: bool,
    out: *mut *mut TcatFactorization,
) -> TcatStatus {
    if f.is_null() || out.is_null() {
        return TcatNullPointer;
    }
    guarded(|| match factorize(&(*f).0, audit) {
        Ok(fr) => {
            *out = Box::into_raw(Box::new(TcatFactorization(fr)));
            TcatOk
        }
        Err(e) => factor_error_status(&e),
    })
}

/// # Safety
/// `fr` must be a handle from `tcat_factorize`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn tcat_factorization_free(fr: *mut TcatFactorization) {
    if !fr.is_null() {
        drop(Box::from_raw(fr));
    }
}

/// The middle category as JSON.
///
/// # Safety
/// `fr` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcat_factorization_middle_json(
    fr: *const TcatFactorization,
) -> *mut c_char {
    if fr.is_null() {
        return ptr::null_mut();
    }
    export_string(category_to_string(&(*fr).0.mid))
}

/// The unit (initial part) as JSON.
///
/// # Safety
/// `fr` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcat_factorization_unit_json(
    fr: *const TcatFactorization,
) -> *mut c_char {
    if fr.is_null() {
        return ptr::null_mut();
    }
    export_string(functor_to_string(&(*fr).0.unit))
}

/// The perfect part as JSON.
///
/// # Safety
/// `fr` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcat_factorization_perfect_json(
    fr: *const TcatFactorization,
) -> *mut c_char {
    if fr.is_null() {
        return ptr::null_mut();
    }
    export_string(functor_to_string(&(*fr).0.perfect))
}

/// The deterministic construction report.
///
/// # Safety
/// `fr` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcat_factorization_report(
    fr: *const TcatFactorization,
) -> *mut c_char {
    if fr.is_null() {
        return ptr::null_mut();
    }
    export_string((*fr).0.report())
}

/// Check unique-diagonal orthogonality of `e` against `m`, enumerating at
/// most `cap` candidates per functor search.
///
/// # Safety
/// `e`, `m` must be live handles and `result_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcat_check_orthogonal(
    e: *const TcatFunctor,
    m: *const TcatFunctor,
    cap: u64,
    result_out: *mut bool,
) -> TcatStatus {
    if e.is_null() || m.is_null() || result_out.is_null() {
        return TcatNullPointer;
    }
    guarded(|| match check_orthogonal(&(*e).0, &(*m).0, cap) {
        Ok(answer) => {
            *result_out = answer;
            TcatOk
        }
        Err(err) => factor_error_status(&err),
    })
}

/// Build the comma-category fibration of an identity-monad functor and
/// return its projection as functor JSON.
///
/// # Safety
/// `f` must be a live handle and `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcat_oracle_projection_json(
    f: *const TcatFunctor,
    json_out: *mut *mut c_char,
) -> TcatStatus {
    if f.is_null() || json_out.is_null() {
        return TcatNullPointer;
    }
    guarded(|| match street_walters_oracle(&(*f).0) {
        Ok(oracle) => {
            *json_out = export_string(functor_to_string(&oracle.proj));
            TcatOk
        }
        Err(err) => factor_error_status(&err),
    })
}
