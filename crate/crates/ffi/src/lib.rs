//! C ABI for the tricorr toolkit.
//!
//! - States live behind an opaque `TcState` handle, created by a `tc_state_*`
//!   constructor and released with [`tc_state_free`].
//! - Every fallible call returns a [`TcStatus`] and writes results through
//!   out-pointers. On failure the out-pointers are left untouched and a
//!   message is available from [`tc_last_error_message`] on the same thread.
//! - Panics never cross the boundary; they surface as `TC_STATUS_PANIC`.
//!
//! # Safety
//!
//! Pointer arguments must be non-null (unless documented otherwise), aligned
//! and valid for the access described. Handles must come from this library
//! and must not be used after being freed.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tricorr::analysis::{sample_correlators, SampleTarget};
use tricorr::correlators::{maccone_sum, mi_tripartite, mp_tripartite, named_basis, named_observable, pcc_tripartite};
use tricorr::density::DensityMatrix3Q;
use tricorr::dynamics::{damp_density, esd_time, gmc_damped_closed, gmc_from_pcc, pcc_damped_closed};
use tricorr::linalg::ComplexMatrix;
use tricorr::measures::{concurrence_fill, global_measure, gmc, triangle_edges};
use tricorr::num_complex::Complex64;
use tricorr::states::{make_ghz, make_ghz_y, make_w, make_x_family, mix_ghz_w, PureState3Q};
use tricorr::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    Numerical = 4,
    Panic = 5,
}

/// Opaque three-qubit state.
pub struct TcState {
    rho: DensityMatrix3Q,
    pure: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> TcStatus {
    match err {
        Error::InvalidInput(_) | Error::UnknownLabel { .. } | Error::OutOfDomain { .. } | Error::UnsupportedFamily(_) => {
            TcStatus::InvalidArgument
        }
        Error::Numerical(_) | Error::Io(_) => TcStatus::Numerical,
        _ => TcStatus::InvalidState,
    }
}

struct Fail(TcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Fail {
    Fail(TcStatus::NullPointer, format!("`{name}` is null"))
}

/// Runs `f`, records any failure and converts panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TcStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            TcStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(state: *const TcState) -> Result<&'a TcState, Fail> {
    state.as_ref().ok_or_else(|| null("state"))
}

unsafe fn label<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if ptr.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Fail(TcStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_state(out: *mut *mut TcState, rho: DensityMatrix3Q, pure: bool) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(TcState { rho, pure })));
    Ok(())
}

unsafe fn complex_slice(ptr: *const f64, len: usize, expect: usize) -> Result<Vec<Complex64>, Fail> {
    if ptr.is_null() {
        return Err(null("re_im"));
    }
    if len != 2 * expect {
        return Err(Fail(
            TcStatus::InvalidArgument,
            format!("expected {} doubles, got {len}", 2 * expect),
        ));
    }
    let raw = std::slice::from_raw_parts(ptr, len);
    Ok(raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `a|000⟩ + b|111⟩`.
#[no_mangle]
pub unsafe extern "C" fn tc_state_ghz(a: f64, b: f64, out: *mut *mut TcState) -> TcStatus {
    guard(|| emit_state(out, make_ghz(a, b)?.to_density(), true))
}

/// `cosθ|100⟩ + (sinθ/√2)(|010⟩ + |001⟩)`.
#[no_mangle]
pub unsafe extern "C" fn tc_state_w(theta: f64, out: *mut *mut TcState) -> TcStatus {
    guard(|| emit_state(out, make_w(theta)?.to_density(), true))
}

#[no_mangle]
pub unsafe extern "C" fn tc_state_x_family(a: f64, out: *mut *mut TcState) -> TcStatus {
    guard(|| emit_state(out, make_x_family(a)?.to_density(), true))
}

/// `√(1−y)|000⟩ + √y|111⟩`.
#[no_mangle]
pub unsafe extern "C" fn tc_state_ghz_y(y: f64, out: *mut *mut TcState) -> TcStatus {
    guard(|| emit_state(out, make_ghz_y(y)?.to_density(), true))
}

/// `p|GHZ⟩⟨GHZ| + (1−p)|W⟩⟨W|`.
#[no_mangle]
pub unsafe extern "C" fn tc_state_mix_ghz_w(p: f64, out: *mut *mut TcState) -> TcStatus {
    guard(|| emit_state(out, mix_ghz_w(p)?, false))
}

/// Pure state from 8 amplitudes stored as interleaved `re, im` (`len` = 16).
/// The norm must already be 1 within 1e-12.
#[no_mangle]
pub unsafe extern "C" fn tc_state_from_amplitudes(re_im: *const f64, len: usize, out: *mut *mut TcState) -> TcStatus {
    guard(|| {
        let amps: [Complex64; 8] = complex_slice(re_im, len, 8)?.try_into().expect("8 entries");
        emit_state(out, PureState3Q::new(amps)?.to_density(), true)
    })
}

/// Density matrix from 64 row-major entries as interleaved `re, im`
/// (`len` = 128).
#[no_mangle]
pub unsafe extern "C" fn tc_state_from_density(re_im: *const f64, len: usize, out: *mut *mut TcState) -> TcStatus {
    guard(|| {
        let m = ComplexMatrix::new(8, 8, complex_slice(re_im, len, 64)?)?;
        let rho = DensityMatrix3Q::new(m)?;
        let pure = rho.is_pure(1e-10);
        emit_state(out, rho, pure)
    })
}

/// New state after local amplitude damping for `t_over_tau`.
#[no_mangle]
pub unsafe extern "C" fn tc_state_damp(state: *const TcState, t_over_tau: f64, out: *mut *mut TcState) -> TcStatus {
    guard(|| {
        let s = state_ref(state)?;
        let rho = damp_density(&s.rho, t_over_tau)?;
        let pure = t_over_tau == 0.0 && s.pure;
        emit_state(out, rho, pure)
    })
}

/// Releases a state. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn tc_state_free(state: *mut TcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

#[no_mangle]
pub unsafe extern "C" fn tc_state_is_pure(state: *const TcState, out: *mut bool) -> TcStatus {
    guard(|| write(out, state_ref(state)?.pure, "out"))
}

/// Copies the density matrix as 128 interleaved doubles, row-major.
#[no_mangle]
pub unsafe extern "C" fn tc_state_density(state: *const TcState, out: *mut f64, len: usize) -> TcStatus {
    guard(|| {
        let s = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len < 128 {
            return Err(Fail(TcStatus::InvalidArgument, format!("buffer holds {len} doubles, need 128")));
        }
        let buf = std::slice::from_raw_parts_mut(out, 128);
        for (k, z) in s.rho.matrix().entries().iter().enumerate() {
            buf[2 * k] = z.re;
            buf[2 * k + 1] = z.im;
        }
        Ok(())
    })
}

/// Squared triangle edges `[D²_1, D²_2, D²_3]`; `out` must hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn tc_triangle_edges(state: *const TcState, out: *mut f64) -> TcStatus {
    guard(|| {
        let e = triangle_edges(&state_ref(state)?.rho).as_array();
        if out.is_null() {
            return Err(null("out"));
        }
        std::ptr::copy_nonoverlapping(e.as_ptr(), out, 3);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tc_concurrence_fill(state: *const TcState, out: *mut f64) -> TcStatus {
    guard(|| {
        let v = concurrence_fill(&state_ref(state)?.rho)?;
        write(out, v, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn tc_gmc(state: *const TcState, out: *mut f64) -> TcStatus {
    guard(|| write(out, gmc(&state_ref(state)?.rho), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn tc_global_measure(state: *const TcState, out: *mut f64) -> TcStatus {
    guard(|| write(out, global_measure(&state_ref(state)?.rho), "out"))
}

/// Tripartite PCC for a named observable (`X`, `Y`, `Z`, `P0`, `P1`,
/// `Pplus`). `per_cut` may be NULL; otherwise it receives 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn tc_pcc_tripartite(
    state: *const TcState,
    observable: *const c_char,
    out: *mut f64,
    per_cut: *mut f64,
) -> TcStatus {
    guard(|| {
        let s = state_ref(state)?;
        let obs = named_observable(label(observable, "observable")?)?;
        let r = pcc_tripartite(&s.rho, &obs);
        write(out, r.tripartite, "out")?;
        if !per_cut.is_null() {
            std::ptr::copy_nonoverlapping(r.per_cut.as_ptr(), per_cut, 3);
        }
        Ok(())
    })
}

/// Tripartite mutual information (bits) in a named basis (`X`, `Y`, `Z`).
#[no_mangle]
pub unsafe extern "C" fn tc_mi_tripartite(state: *const TcState, basis: *const c_char, out: *mut f64) -> TcStatus {
    guard(|| {
        let s = state_ref(state)?;
        let r = mi_tripartite(&s.rho, &named_basis(label(basis, "basis")?)?)?;
        write(out, r.tripartite, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn tc_mp_tripartite(state: *const TcState, basis: *const c_char, out: *mut f64) -> TcStatus {
    guard(|| {
        let s = state_ref(state)?;
        let v = mp_tripartite(&s.rho, &named_basis(label(basis, "basis")?)?)?;
        write(out, v, "out")
    })
}

/// Sum of the tripartite PCCs of two named observables. Cuts with zero
/// variance count as zero.
#[no_mangle]
pub unsafe extern "C" fn tc_maccone_sum(
    state: *const TcState,
    obs1: *const c_char,
    obs2: *const c_char,
    out: *mut f64,
) -> TcStatus {
    guard(|| {
        let s = state_ref(state)?;
        let o1 = named_observable(label(obs1, "obs1")?)?;
        let o2 = named_observable(label(obs2, "obs2")?)?;
        write(out, maccone_sum(&s.rho, &o1, &o2).sum, "out")
    })
}

/// Finite-shot PCC estimate with a bootstrap standard error.
#[no_mangle]
pub unsafe extern "C" fn tc_sample_pcc(
    state: *const TcState,
    observable: *const c_char,
    shots: u64,
    seed: u64,
    estimate: *mut f64,
    std_error: *mut f64,
) -> TcStatus {
    guard(|| {
        let s = state_ref(state)?;
        let target = SampleTarget::Pcc(named_observable(label(observable, "observable")?)?);
        let est = sample_correlators(&s.rho, &target, shots, seed)?;
        write(estimate, est.estimate, "estimate")?;
        write(std_error, est.std_error, "std_error")
    })
}

/// Sudden-death time for `√(1−y)|000⟩ + √y|111⟩`. When there is none,
/// `has_root` is false and `out` is left untouched.
#[no_mangle]
pub unsafe extern "C" fn tc_esd_time(y: f64, out: *mut f64, has_root: *mut bool) -> TcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        match esd_time(y)? {
            Some(t) => {
                out.write(t);
                write(has_root, true, "has_root")
            }
            None => write(has_root, false, "has_root"),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn tc_gmc_damped_closed(y: f64, t_over_tau: f64, out: *mut f64) -> TcStatus {
    guard(|| write(out, gmc_damped_closed(y, t_over_tau)?, "out"))
}

#[no_mangle]
pub unsafe extern "C" fn tc_pcc_damped_closed(y: f64, t_over_tau: f64, out: *mut f64) -> TcStatus {
    guard(|| write(out, pcc_damped_closed(y, t_over_tau)?, "out"))
}

#[no_mangle]
pub unsafe extern "C" fn tc_gmc_from_pcc(c_plus: f64, y: f64, out: *mut f64) -> TcStatus {
    guard(|| write(out, gmc_from_pcc(c_plus, y)?, "out"))
}
