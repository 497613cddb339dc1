//! C ABI over `qrlift`.
//!
//! Every function returns a [`QrStatus`]; on failure the message is kept per
//! thread and read with [`qrlift_last_error_message`]. Strings returned
//! through `out` parameters are owned by the caller and released with
//! [`qrlift_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qrlift::{Error, Ring};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    CapExceeded = 4,
    Overflow = 5,
    NotAUnit = 6,
    Hypothesis = 7,
    Precondition = 8,
    ChainViolation = 9,
    InvalidArgument = 10,
    BufferTooSmall = 11,
    Internal = 12,
    Panic = 13,
}

/// A parsed ring.
pub struct QrRing {
    ring: Ring,
}

/// Square roots of one element, rendered as literals.
pub struct QrSolutionSet {
    roots: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> QrStatus {
    match e {
        Error::InvalidSpec(_) | Error::Syntax { .. } => QrStatus::InvalidSpec,
        Error::CapExceeded { .. } => QrStatus::CapExceeded,
        Error::CardinalityOverflow => QrStatus::Overflow,
        Error::NotAUnit(_) => QrStatus::NotAUnit,
        Error::Hypothesis(_) => QrStatus::Hypothesis,
        Error::Precondition(_) | Error::NotNil => QrStatus::Precondition,
        Error::Chain(_) => QrStatus::ChainViolation,
        Error::RingMismatch(_) | Error::InvalidArgument(_) => QrStatus::InvalidArgument,
        Error::NonConvergence { .. } | Error::FactorizationBound { .. } | Error::Invariant(_) => QrStatus::Internal,
    }
}

struct Failure(QrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> QrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QrStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QrStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(QrStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QrStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn ring_ref<'a>(p: *const QrRing) -> Result<&'a Ring, Failure> {
    p.as_ref().map(|r| &r.ring).ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Parses `spec` into a ring. `cap` bounds enumeration; 0 selects the
/// library default.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qrlift_ring_new(spec: *const c_char, cap: u64, out: *mut *mut QrRing) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = qrlift::parse_ring_spec(text(spec)?)?;
        let cap = if cap == 0 { qrlift::ring::DEFAULT_CAP } else { cap };
        let ring = Ring::with_cap(&spec, cap)?;
        write(out, Box::into_raw(Box::new(QrRing { ring })))
    })
}

/// # Safety
/// `ring` must come from [`qrlift_ring_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qrlift_ring_free(ring: *mut QrRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// # Safety
/// `ring` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrlift_ring_cardinality(ring: *const QrRing, out: *mut u64) -> QrStatus {
    guard(|| {
        let r = ring_ref(ring)?;
        let n = u64::try_from(r.cardinality())
            .map_err(|_| Failure(QrStatus::Overflow, format!("|{r}| does not fit in 64 bits")))?;
        write(out, n)
    })
}

/// Writes the canonical spelling of the ring's spec.
///
/// # Safety
/// `ring` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrlift_ring_describe(ring: *const QrRing, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let r = ring_ref(ring)?;
        write(out, owned_string(r.label().to_string()))
    })
}

/// Whether `value` is both a unit and a square.
///
/// # Safety
/// `ring` must be live, `value` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrlift_is_qr_unit(ring: *const QrRing, value: *const c_char, out: *mut bool) -> QrStatus {
    guard(|| {
        let r = ring_ref(ring)?;
        let a = r.parse_element(text(value)?)?;
        write(out, qrlift::is_qr_unit(r, &a)?)
    })
}

/// Every square root of `value`, ascending.
///
/// # Safety
/// `ring` must be live, `value` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrlift_sqrt_all(
    ring: *const QrRing,
    value: *const c_char,
    out: *mut *mut QrSolutionSet,
) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let r = ring_ref(ring)?;
        let a = r.parse_element(text(value)?)?;
        let set = qrlift::sqrt_all(r, &a)?;
        let roots = set
            .rendered()
            .into_iter()
            .map(|s| CString::new(s).unwrap_or_default())
            .collect();
        write(out, Box::into_raw(Box::new(QrSolutionSet { roots })))
    })
}

/// # Safety
/// `set` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn qrlift_solution_set_len(set: *const QrSolutionSet) -> usize {
    set.as_ref().map_or(0, |s| s.roots.len())
}

/// The `index`-th root, or null when out of range. The string is owned by
/// the set.
///
/// # Safety
/// `set` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn qrlift_solution_set_get(set: *const QrSolutionSet, index: usize) -> *const c_char {
    set.as_ref()
        .and_then(|s| s.roots.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// # Safety
/// `set` must come from [`qrlift_sqrt_all`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qrlift_solution_set_free(set: *mut QrSolutionSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Square roots of the unit `a` modulo odd `n`, written ascending into
/// `roots[0..capacity]`. `count` always receives the number of roots; when it
/// exceeds `capacity` nothing is written and `BufferTooSmall` is returned.
///
/// # Safety
/// `roots` must point to `capacity` writable values (or be null when
/// `capacity` is 0) and `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrlift_sqrt_zn(
    n: u64,
    a: u64,
    roots: *mut u64,
    capacity: usize,
    count: *mut usize,
) -> QrStatus {
    guard(|| {
        if count.is_null() {
            return Err(null());
        }
        let found = qrlift::sqrt_zn(n, a, None)?.residues();
        write(count, found.len())?;
        if found.len() > capacity {
            return Err(Failure(
                QrStatus::BufferTooSmall,
                format!("{} roots do not fit in a buffer of {capacity}", found.len()),
            ));
        }
        if !found.is_empty() {
            if roots.is_null() {
                return Err(null());
            }
            std::slice::from_raw_parts_mut(roots, found.len()).copy_from_slice(&found);
        }
        Ok(())
    })
}

/// Census report as JSON. `chain` is null for the default chain, otherwise
/// `;`-separated ideals such as `"5; 25"`.
///
/// # Safety
/// `ring` must be live, `chain` null or NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qrlift_census_json(
    ring: *const QrRing,
    chain: *const c_char,
    out: *mut *mut c_char,
) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let r = ring_ref(ring)?;
        let report = if chain.is_null() {
            qrlift::ring_census(r)?
        } else {
            let ideals = qrlift::parse_chain(r, text(chain)?)?;
            qrlift::chain_census(&qrlift::verify_chain(r, &ideals)?)?
        };
        write(out, owned_string(report.to_json()))
    })
}

/// `Ok` when the chain satisfies every chain condition, `ChainViolation`
/// with a diagnostic otherwise.
///
/// # Safety
/// `ring` must be live and `chain` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qrlift_cnc_verify(ring: *const QrRing, chain: *const c_char) -> QrStatus {
    guard(|| {
        let r = ring_ref(ring)?;
        let ideals = qrlift::parse_chain(r, text(chain)?)?;
        qrlift::verify_cnc(r, &ideals)?;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qrlift_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn qrlift_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
