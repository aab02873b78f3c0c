//! C ABI over the `dirichlet_arg` library.
//!
//! Every fallible call returns a `DaStatus`; on failure the message is available
//! from `da_last_error_message` on the same thread. Handles are opaque and must be
//! released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dirichlet_arg::characters::{build_family, CharacterFamily};
use dirichlet_arg::constants::{big_d, mean_square_bound, DParams};
use dirichlet_arg::lfunc::{critical_zeros_window, l_value, s_of_t, ZeroList};
use dirichlet_arg::Error;
use num_complex::Complex64;

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DaStatus {
    Ok = 0,
    NullPointer = 1,
    Constraint = 2,
    Domain = 3,
    Capacity = 4,
    Divergence = 5,
    Pole = 6,
    Unsupported = 7,
    NearSingular = 8,
    Numeric = 9,
    Panic = 10,
}

impl From<&Error> for DaStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Constraint(_) => DaStatus::Constraint,
            Error::Domain(_) => DaStatus::Domain,
            Error::Capacity(_) => DaStatus::Capacity,
            Error::Divergence(_) => DaStatus::Divergence,
            Error::Pole(_) => DaStatus::Pole,
            Error::Unsupported(_) => DaStatus::Unsupported,
            Error::NearSingular { .. } => DaStatus::NearSingular,
            Error::Numeric(_) => DaStatus::Numeric,
        }
    }
}

/// A character family modulo a prime.
pub struct DaFamily {
    inner: CharacterFamily,
}

/// Critical zeros of one L-function in a window.
pub struct DaZeroList {
    inner: ZeroList,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (DaStatus, String)>) -> DaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the library".into());
            DaStatus::Panic
        }
    }
}

fn lib(e: Error) -> (DaStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (DaStatus, String) {
    (DaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (DaStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn family<'a>(p: *const DaFamily) -> Result<&'a CharacterFamily, (DaStatus, String)> {
    p.as_ref().map(|f| &f.inner).ok_or_else(|| null("family"))
}

/// Message of the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn da_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn da_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds the characters modulo the prime `q` into `*out_family`.
///
/// # Safety
/// `out_family` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn da_family_new(q: u64, out_family: *mut *mut DaFamily) -> DaStatus {
    guard(|| {
        let slot = out(out_family, "out_family")?;
        let inner = build_family(q).map_err(lib)?;
        *slot = Box::into_raw(Box::new(DaFamily { inner }));
        Ok(())
    })
}

/// Releases a family. NULL is ignored.
///
/// # Safety
/// `f` must come from `da_family_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn da_family_free(f: *mut DaFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of characters (q − 1), or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live family.
#[no_mangle]
pub unsafe extern "C" fn da_family_len(f: *const DaFamily) -> usize {
    f.as_ref().map_or(0, |f| f.inner.len())
}

/// Primitive root used to index the characters, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live family.
#[no_mangle]
pub unsafe extern "C" fn da_family_generator(f: *const DaFamily) -> u64 {
    f.as_ref().map_or(0, |f| f.inner.generator())
}

/// χ_j(n) as real and imaginary parts.
///
/// # Safety
/// `f` must be a live family; `re` and `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn da_character_value(
    f: *const DaFamily,
    index: usize,
    n: u64,
    re: *mut f64,
    im: *mut f64,
) -> DaStatus {
    guard(|| {
        let ch = family(f)?.character(index).map_err(lib)?;
        let v = ch.value(n);
        *out(re, "re")? = v.re;
        *out(im, "im")? = v.im;
        Ok(())
    })
}

/// L(σ + it, χ_j).
///
/// # Safety
/// `f` must be a live family; `re` and `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn da_l_value(
    f: *const DaFamily,
    index: usize,
    sigma: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> DaStatus {
    guard(|| {
        let ch = family(f)?.character(index).map_err(lib)?;
        let v = l_value(Complex64::new(sigma, t), &ch).map_err(lib)?;
        *out(re, "re")? = v.re;
        *out(im, "im")? = v.im;
        Ok(())
    })
}

/// S(t, χ_j) for a non-principal character.
///
/// # Safety
/// `f` must be a live family; `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn da_s_of_t(f: *const DaFamily, index: usize, t: f64, value: *mut f64) -> DaStatus {
    guard(|| {
        let ch = family(f)?.character(index).map_err(lib)?;
        *out(value, "value")? = s_of_t(t, &ch).map_err(lib)?.s;
        Ok(())
    })
}

/// Critical zeros of L(s, χ_j) with t_lo ≤ γ ≤ t_hi.
///
/// # Safety
/// `f` must be a live family; `out_zeros` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn da_zeros_new(
    f: *const DaFamily,
    index: usize,
    t_lo: f64,
    t_hi: f64,
    out_zeros: *mut *mut DaZeroList,
) -> DaStatus {
    guard(|| {
        let slot = out(out_zeros, "out_zeros")?;
        let ch = family(f)?.character(index).map_err(lib)?;
        let inner = critical_zeros_window(&ch, t_lo, t_hi).map_err(lib)?;
        *slot = Box::into_raw(Box::new(DaZeroList { inner }));
        Ok(())
    })
}

/// Releases a zero list. NULL is ignored.
///
/// # Safety
/// `z` must come from `da_zeros_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn da_zeros_free(z: *mut DaZeroList) {
    if !z.is_null() {
        drop(Box::from_raw(z));
    }
}

/// Number of ordinates, or 0 for NULL.
///
/// # Safety
/// `z` must be NULL or a live zero list.
#[no_mangle]
pub unsafe extern "C" fn da_zeros_len(z: *const DaZeroList) -> usize {
    z.as_ref().map_or(0, |z| z.inner.ordinates.len())
}

/// Ascending ordinates; `da_zeros_len` entries, owned by the list.
///
/// # Safety
/// `z` must be NULL or a live zero list.
#[no_mangle]
pub unsafe extern "C" fn da_zeros_ordinates(z: *const DaZeroList) -> *const f64 {
    z.as_ref().map_or(ptr::null(), |z| z.inner.ordinates.as_ptr())
}

/// True when the contour count agrees with the located zeros.
///
/// # Safety
/// `z` must be NULL or a live zero list.
#[no_mangle]
pub unsafe extern "C" fn da_zeros_validated(z: *const DaZeroList) -> bool {
    z.as_ref().is_some_and(|z| z.inner.validated)
}

/// √D(η, δ, κ, k, ε).
///
/// # Safety
/// `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn da_sqrt_d(eta: f64, delta: f64, kappa: f64, k: u32, eps: f64, value: *mut f64) -> DaStatus {
    guard(|| {
        let slot = out(value, "value")?;
        *slot = big_d(&DParams { eta, delta, kappa, k, eps }).map_err(lib)?.sqrt();
        Ok(())
    })
}

/// (2C₀ + (√2/π)·√(∫₀^{3β/50} sin²(2πy)/y dy))².
///
/// # Safety
/// `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn da_mean_square_bound(beta: f64, value: *mut f64) -> DaStatus {
    guard(|| {
        let slot = out(value, "value")?;
        *slot = mean_square_bound(beta).map_err(lib)?;
        Ok(())
    })
}
