//! C ABI over `xlegendre`.
//!
//! Families live behind an opaque `XlFamily` handle. Every entry point
//! returns an `XlStatus`; on failure the message is kept per thread and can
//! be read with `xl_last_error`. Strings handed out by the library must be
//! released with `xl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xlegendre::admissibility::{is_admissible, norm_of};
use xlegendre::operator::verify_eigen_in;
use xlegendre::{format_rat, parse_rat, Error, FamilyKey, XFamily};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Inadmissible = 3,
    Internal = 4,
    Panic = 5,
}

/// Opaque family handle.
pub struct XlFamily {
    inner: XFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> XlStatus {
    match err {
        Error::Inadmissible => XlStatus::Inadmissible,
        Error::InvariantViolation(_) => XlStatus::Internal,
        _ => XlStatus::InvalidArgument,
    }
}

fn fail(status: XlStatus, msg: impl Into<String>) -> XlStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning a panic into `XlStatus::Panic`.
fn guard(f: impl FnOnce() -> XlStatus) -> XlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(XlStatus::Panic, msg)
        }
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> XlStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            XlStatus::Ok
        }
        Err(e) => fail(XlStatus::Internal, e.to_string()),
    }
}

/// Builds a family from `n` levels and `n` rational literals such as
/// `"7/2"` or `"-3"`. Repeated levels are merged as usual. On success
/// `*out` owns a handle to be released with `xl_family_free`.
///
/// # Safety
/// `m` and `t` must point to `n` readable elements (either may be null when
/// `n` is 0), each `t[k]` a NUL-terminated string, and `out` a writable
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn xl_family_new(
    m: *const u32,
    t: *const *const c_char,
    n: usize,
    out: *mut *mut XlFamily,
) -> XlStatus {
    guard(|| {
        if out.is_null() || (n > 0 && (m.is_null() || t.is_null())) {
            return fail(XlStatus::NullPointer, "null argument to xl_family_new");
        }
        *out = ptr::null_mut();
        let mut levels = Vec::with_capacity(n);
        let mut params = Vec::with_capacity(n);
        for k in 0..n {
            levels.push(*m.add(k) as usize);
            let s = *t.add(k);
            if s.is_null() {
                return fail(XlStatus::NullPointer, format!("parameter {k} is null"));
            }
            let Ok(text) = CStr::from_ptr(s).to_str() else {
                return fail(XlStatus::InvalidArgument, format!("parameter {k} is not UTF-8"));
            };
            match parse_rat(text) {
                Ok(r) => params.push(r),
                Err(e) => return fail(status_of(&e), e.to_string()),
            }
        }
        let key = match FamilyKey::new(levels, params) {
            Ok(k) => k,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let family = Box::new(XlFamily { inner: XFamily::new(&key) });
        *out = Box::into_raw(family);
        XlStatus::Ok
    })
}

/// # Safety
/// `family` must be null or a handle from `xl_family_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xl_family_free(family: *mut XlFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of deformed levels after merging duplicates.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xl_family_len(family: *const XlFamily, out: *mut usize) -> XlStatus {
    guard(|| {
        if family.is_null() || out.is_null() {
            return fail(XlStatus::NullPointer, "null argument to xl_family_len");
        }
        *out = (*family).inner.key().len();
        XlStatus::Ok
    })
}

/// `tau` as a JSON array of rational strings, lowest power first.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xl_family_tau_json(family: *const XlFamily, out: *mut *mut c_char) -> XlStatus {
    guard(|| {
        if family.is_null() || out.is_null() {
            return fail(XlStatus::NullPointer, "null argument to xl_family_tau_json");
        }
        match serde_json::to_string((*family).inner.tau()) {
            Ok(s) => write_string(out, s),
            Err(e) => fail(XlStatus::Internal, e.to_string()),
        }
    })
}

/// `P_{m;i}` as a JSON array of rational strings, lowest power first.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xl_family_poly_json(
    family: *const XlFamily,
    i: u32,
    out: *mut *mut c_char,
) -> XlStatus {
    guard(|| {
        if family.is_null() || out.is_null() {
            return fail(XlStatus::NullPointer, "null argument to xl_family_poly_json");
        }
        match serde_json::to_string(&(*family).inner.poly(i as usize)) {
            Ok(s) => write_string(out, s),
            Err(e) => fail(XlStatus::Internal, e.to_string()),
        }
    })
}

/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xl_family_is_admissible(family: *const XlFamily, out: *mut bool) -> XlStatus {
    guard(|| {
        if family.is_null() || out.is_null() {
            return fail(XlStatus::NullPointer, "null argument to xl_family_is_admissible");
        }
        *out = is_admissible((*family).inner.key());
        XlStatus::Ok
    })
}

/// Squared norm of `P_{m;i}` as an exact rational string. Fails with
/// `XL_STATUS_INADMISSIBLE` when the weight is singular.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xl_family_norm(family: *const XlFamily, i: u32, out: *mut *mut c_char) -> XlStatus {
    guard(|| {
        if family.is_null() || out.is_null() {
            return fail(XlStatus::NullPointer, "null argument to xl_family_norm");
        }
        match norm_of((*family).inner.key(), i as usize) {
            Ok(v) => write_string(out, format_rat(&v)),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Exact check of `T P_{m;i} = -i(i+1) P_{m;i}`.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xl_family_verify_eigen(family: *const XlFamily, i: u32, out: *mut bool) -> XlStatus {
    guard(|| {
        if family.is_null() || out.is_null() {
            return fail(XlStatus::NullPointer, "null argument to xl_family_verify_eigen");
        }
        *out = verify_eigen_in(&(*family).inner, i as usize);
        XlStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn xl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
