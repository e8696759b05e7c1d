//! C interface to `fermat_actions`.
//!
//! Every fallible function returns a [`FaStatus`] and writes its result through
//! an out-pointer. On failure a message is kept per thread and can be read with
//! [`fa_last_error_message`]. Handles are opaque and must be released with the
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fermat_actions::classify::{classify_triples, invariant_set, orbit_partition_with, TripleMode};
use fermat_actions::enumeration::{enumerate_actions, ActionParams, SubgroupKey};
use fermat_actions::geometry::total_genus;
use fermat_actions::hgroup::{normalizer_in_symmetric, PermGroup};
use fermat_actions::predictions::FamilyCase;
use fermat_actions::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ScaleCap = 3,
    OutOfRange = 4,
    Unsupported = 5,
    Panic = 6,
}

/// A permutation group on {1..degree}.
pub struct FaPermGroup {
    group: PermGroup,
}

/// A sorted set of admissible subgroup keys with common parameters.
pub struct FaKeySet {
    params: ActionParams,
    keys: Vec<SubgroupKey>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> FaStatus {
    match e {
        Error::ScaleCap { .. } | Error::GroupTooLarge { .. } => FaStatus::ScaleCap,
        Error::IndexOutOfRange { .. } => FaStatus::OutOfRange,
        Error::Unsupported(_) | Error::DegreeTooLarge(_) => FaStatus::Unsupported,
        _ => FaStatus::InvalidArgument,
    }
}

struct Fail(FaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FaStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FaStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(FaStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

fn params(p: u64, n: u32, m: u32) -> Result<ActionParams, Fail> {
    Ok(ActionParams::new(p, n as usize, m as usize)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread; empty after a success.
///
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn fa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Genus of the curve with an action of Z_k^m of signature (0; k^(n+1)).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_total_genus(k: u64, n: u64, m: u64, out: *mut u64) -> FaStatus {
    guard(|| write(out, total_genus(k, n, m)?))
}

/// Builds the group generated by permutations in cycle notation.
///
/// # Safety
/// `generators` must point to `count` NUL-terminated strings (or be null when
/// `count` is 0), and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_group_new(
    degree: u32,
    generators: *const *const c_char,
    count: usize,
    out: *mut *mut FaPermGroup,
) -> FaStatus {
    guard(|| {
        if generators.is_null() && count > 0 {
            return Err(null("generators"));
        }
        let mut gens = Vec::with_capacity(count);
        for i in 0..count {
            gens.push(str_arg(*generators.add(i), "generator")?);
        }
        let group = PermGroup::from_cycle_strings(degree as usize, &gens)?;
        write(out, Box::into_raw(Box::new(FaPermGroup { group })))
    })
}

/// The group of a named case such as "N5_D3".
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_group_from_case(name: *const c_char, out: *mut *mut FaPermGroup) -> FaStatus {
    guard(|| {
        let case: FamilyCase = str_arg(name, "name")?.parse()?;
        write(out, Box::into_raw(Box::new(FaPermGroup { group: case.group() })))
    })
}

/// # Safety
/// `group` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_group_order(group: *const FaPermGroup, out: *mut usize) -> FaStatus {
    guard(|| write(out, deref(group, "group")?.group.order()))
}

/// The normalizer of `group` in the symmetric group of its degree.
///
/// # Safety
/// `group` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_group_normalizer(group: *const FaPermGroup, out: *mut *mut FaPermGroup) -> FaStatus {
    guard(|| {
        let n = normalizer_in_symmetric(&deref(group, "group")?.group)?;
        write(out, Box::into_raw(Box::new(FaPermGroup { group: n })))
    })
}

/// # Safety
/// `group` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fa_group_free(group: *mut FaPermGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// All admissible keys for (p, n, m).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_enumerate(p: u64, n: u32, m: u32, out: *mut *mut FaKeySet) -> FaStatus {
    guard(|| {
        let params = params(p, n, m)?;
        let keys = enumerate_actions(&params)?;
        write(out, Box::into_raw(Box::new(FaKeySet { params, keys })))
    })
}

/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_keyset_len(set: *const FaKeySet, out: *mut usize) -> FaStatus {
    guard(|| write(out, deref(set, "key set")?.keys.len()))
}

/// Text form "p/n/m:rows" of key `index`; free it with [`fa_string_free`].
///
/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_keyset_key_string(set: *const FaKeySet, index: usize, out: *mut *mut c_char) -> FaStatus {
    guard(|| {
        let set = deref(set, "key set")?;
        let key = set.keys.get(index).ok_or_else(|| {
            Fail(
                FaStatus::OutOfRange,
                format!("index {index} out of range for {} keys", set.keys.len()),
            )
        })?;
        let s = CString::new(key.to_string()).expect("keys have no NUL");
        write(out, s.into_raw())
    })
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fa_keyset_free(set: *mut FaKeySet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of orbits of `group` on `set`.
///
/// # Safety
/// Both handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_count_orbits(set: *const FaKeySet, group: *const FaPermGroup, out: *mut usize) -> FaStatus {
    guard(|| {
        let set = deref(set, "key set")?;
        let group = &deref(group, "group")?.group;
        write(out, orbit_partition_with(set.params, &set.keys, group)?.count)
    })
}

/// The keys of `set` fixed by every element of `group`.
///
/// # Safety
/// Both handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_invariant_set(
    set: *const FaKeySet,
    group: *const FaPermGroup,
    out: *mut *mut FaKeySet,
) -> FaStatus {
    guard(|| {
        let set = deref(set, "key set")?;
        let group = &deref(group, "group")?.group;
        if group.degree() != set.params.degree() {
            return Err(Error::DegreeMismatch {
                expected: set.params.degree(),
                found: group.degree(),
            }
            .into());
        }
        let keys = invariant_set(&set.keys, group)?;
        write(
            out,
            Box::into_raw(Box::new(FaKeySet {
                params: set.params,
                keys,
            })),
        )
    })
}

/// Number of inequivalent triples for `q` at (p, n, 2); `predicted` selects
/// the closed-form family instead of the full enumeration.
///
/// # Safety
/// `q` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fa_classify_triples(
    p: u64,
    n: u32,
    q: *const FaPermGroup,
    predicted: c_int,
    out: *mut usize,
) -> FaStatus {
    guard(|| {
        let params = params(p, n, 2)?;
        let q = &deref(q, "group")?.group;
        let mode = if predicted != 0 {
            TripleMode::Predicted
        } else {
            TripleMode::Exhaustive
        };
        write(out, classify_triples(&params, q, mode)?.count)
    })
}
