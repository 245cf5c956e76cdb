//! C ABI over `frieze-core`.
//!
//! Every call returns a [`FriezeStatus`]; on failure a message is available
//! from [`frieze_last_error`] until the next call on the same thread. Sets
//! are opaque and owned by the caller, who releases them with
//! [`frieze_set_free`]; strings handed out are released with
//! [`frieze_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use frieze_core::error::FriezeError;
use frieze_core::folding::{enumerate_folded, folded_count_formula, FoldedType};
use frieze_core::frieze::Frieze;
use frieze_core::frieze_a::{enumerate_nonzero_a, nonzero_a_count};
use frieze_core::frieze_d::{enumerate_nonzero_d, nonzero_d_count};
use frieze_core::ring::Ring;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FriezeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    /// A relation forced a value outside the ring.
    NotIntegral = 4,
    /// A relation forced a zero label.
    ZeroLabel = 5,
    /// The input contradicts a relation.
    Inconsistent = 6,
    Internal = 7,
}

/// Enumerated friezes, each held as its JSON text.
pub struct FriezeSet {
    items: Vec<CString>,
    positive: Vec<bool>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: FriezeStatus, msg: impl Into<String>) -> FriezeStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &FriezeError) -> FriezeStatus {
    match e {
        FriezeError::NotIntegral { .. } => FriezeStatus::NotIntegral,
        FriezeError::ZeroLabel { .. } => FriezeStatus::ZeroLabel,
        FriezeError::Inconsistent { .. } => FriezeStatus::Inconsistent,
        FriezeError::Contract(_) => FriezeStatus::Internal,
        _ => FriezeStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guarded(f: impl FnOnce() -> Result<(), FriezeError>) -> FriezeStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FriezeStatus::Ok,
        Ok(Err(e)) => fail(status_of(&e), e.to_string()),
        Err(_) => fail(FriezeStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, FriezeStatus> {
    if p.is_null() {
        return Err(fail(FriezeStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(FriezeStatus::InvalidArgument, "string is not UTF-8"))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library.
#[no_mangle]
pub extern "C" fn frieze_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn frieze_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Enumerates every non-zero integral frieze of `kind` ("A", "B", "C", "D"
/// or "G2") and `rank` over the integers.
///
/// # Safety
/// `kind` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frieze_enumerate(kind: *const c_char, rank: u32, out: *mut *mut FriezeSet) -> FriezeStatus {
    if out.is_null() {
        return fail(FriezeStatus::NullPointer, "null output pointer");
    }
    *out = ptr::null_mut();
    let kind = match read_str(kind) {
        Ok(k) => k.to_owned(),
        Err(s) => return s,
    };
    let rank = rank as usize;
    let mut set = None;
    let status = guarded(|| {
        let (json, positive): (Vec<String>, Vec<bool>) = match kind.as_str() {
            "A" if rank >= 1 => enumerate_nonzero_a(rank + 3, Ring::Z)?
                .into_iter()
                .map(|f| (f.to_json().to_string(), f.is_positive()))
                .unzip(),
            "D" if rank >= 2 => enumerate_nonzero_d(rank)?
                .into_iter()
                .map(|f| (f.to_json().to_string(), f.is_positive()))
                .unzip(),
            "A" | "D" => return Err(FriezeError::InvalidInput(format!("rank {rank} too small for {kind}"))),
            other => {
                let folded: FoldedType = other.parse()?;
                let (s, fs) = enumerate_folded(folded, rank)?;
                fs.iter().map(|g| (g.to_json(&s).to_string(), g.is_positive())).unzip()
            }
        };
        let items = json.into_iter().map(|s| CString::new(s).expect("JSON has no NUL")).collect();
        set = Some(FriezeSet { items, positive });
        Ok(())
    });
    if let Some(set) = set {
        *out = Box::into_raw(Box::new(set));
    }
    status
}

/// Number of friezes in `set` (0 for null).
///
/// # Safety
/// `set` must be null or come from [`frieze_enumerate`].
#[no_mangle]
pub unsafe extern "C" fn frieze_set_len(set: *const FriezeSet) -> usize {
    set.as_ref().map_or(0, |s| s.items.len())
}

/// Number of entrywise positive friezes in `set` (0 for null).
///
/// # Safety
/// `set` must be null or come from [`frieze_enumerate`].
#[no_mangle]
pub unsafe extern "C" fn frieze_set_positive_count(set: *const FriezeSet) -> usize {
    set.as_ref().map_or(0, |s| s.positive.iter().filter(|&&p| p).count())
}

/// Copies frieze `index` as JSON into a new string for the caller, to be
/// released with [`frieze_string_free`].
///
/// # Safety
/// `set` must come from [`frieze_enumerate`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn frieze_set_item_json(set: *const FriezeSet, index: usize, out: *mut *mut c_char) -> FriezeStatus {
    if out.is_null() {
        return fail(FriezeStatus::NullPointer, "null output pointer");
    }
    *out = ptr::null_mut();
    let Some(set) = set.as_ref() else {
        return fail(FriezeStatus::NullPointer, "null set");
    };
    match set.items.get(index) {
        Some(s) => {
            *out = s.clone().into_raw();
            FriezeStatus::Ok
        }
        None => fail(FriezeStatus::OutOfRange, format!("index {index} out of range ({} friezes)", set.items.len())),
    }
}

/// # Safety
/// `set` must be null or come from [`frieze_enumerate`], and not be used again.
#[no_mangle]
pub unsafe extern "C" fn frieze_set_free(set: *mut FriezeSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `s` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn frieze_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Closed-form count of non-zero integral friezes of `kind` and `rank`.
///
/// # Safety
/// `kind` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frieze_count_formula(kind: *const c_char, rank: u32, out: *mut u64) -> FriezeStatus {
    if out.is_null() {
        return fail(FriezeStatus::NullPointer, "null output pointer");
    }
    let kind = match read_str(kind) {
        Ok(k) => k.to_owned(),
        Err(s) => return s,
    };
    let rank = rank as usize;
    guarded(|| {
        *out = match kind.as_str() {
            "A" if rank >= 1 => nonzero_a_count(rank + 3),
            "D" if rank >= 2 => nonzero_d_count(rank),
            "A" | "D" => return Err(FriezeError::InvalidInput(format!("rank {rank} too small for {kind}"))),
            other => folded_count_formula(other.parse()?, rank)?,
        };
        Ok(())
    })
}

/// Checks a type A or D frieze given as JSON: `*valid` is set to whether
/// every relation holds with no zero label.
///
/// # Safety
/// `json` must be a NUL-terminated string and `valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frieze_check_json(json: *const c_char, valid: *mut bool) -> FriezeStatus {
    if valid.is_null() {
        return fail(FriezeStatus::NullPointer, "null output pointer");
    }
    let text = match read_str(json) {
        Ok(t) => t.to_owned(),
        Err(s) => return s,
    };
    guarded(|| {
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| FriezeError::InvalidInput(format!("JSON: {e}")))?;
        *valid = Frieze::from_json(&v)?.is_valid()?;
        Ok(())
    })
}
