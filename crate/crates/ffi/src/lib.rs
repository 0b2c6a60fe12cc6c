//! C ABI for `emdyn`.
//!
//! Conventions:
//!
//! * Every fallible function returns an [`EmdynStatus`]; results come back
//!   through out-pointers, which are left untouched on failure.
//! * On failure a message is kept per thread and can be read with
//!   [`emdyn_last_error_message`].
//! * Handles ([`EmdynState`], [`EmdynTrajectory`]) and strings returned by
//!   this library are owned by the caller and released with the matching
//!   `*_free` function.
//! * Matrices cross the boundary as 32 doubles: the 4×4 entries in row-major
//!   order, each as a `(re, im)` pair, in the basis `|11>, |10>, |01>, |00>`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use emdyn::critical_times::{self, CriticalTime};
use emdyn::dynamics::{self, EmissionRates};
use emdyn::linalg::CMatrix4;
use emdyn::states::{DensityMatrix, Family, FamilyKind, Sign};
use emdyn::trajectory::{Trajectory, TrajectoryRow};
use emdyn::Error;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmdynStatus {
    Ok = 0,
    NullPointer = 1,
    /// A parameter is out of range.
    InvalidArgument = 2,
    /// The matrix is not a valid density matrix.
    InvalidState = 3,
    /// Malformed JSON or text input.
    ParseError = 4,
    NumericError = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmdynFamily {
    PurePhi = 0,
    PurePsi = 1,
    WernerPhi = 2,
    WernerPsi = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmdynTimeKind {
    Finite = 0,
    Asymptotic = 1,
    Immediate = 2,
}

/// A critical time; `tau` is NaN unless `kind` is finite.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct EmdynCriticalTime {
    pub kind: EmdynTimeKind,
    pub tau: f64,
}

/// One trajectory sample. `c1`, `c2`, `u1`, `u2` are NaN when
/// `has_x_terms` is false.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct EmdynRow {
    pub tau: f64,
    pub concurrence: f64,
    pub m: f64,
    pub c1: f64,
    pub c2: f64,
    pub u1: f64,
    pub u2: f64,
    pub has_x_terms: bool,
    pub entangled: bool,
    pub violates: bool,
}

/// Opaque two-qubit density matrix.
pub struct EmdynState(DensityMatrix);

/// Opaque sampled trajectory.
pub struct EmdynTrajectory(Trajectory);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(EmdynStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::OutOfRange { .. } | Error::UnequalRates { .. } => EmdynStatus::InvalidArgument,
            Error::Format(_) => EmdynStatus::ParseError,
            Error::ComplexCorrelation { .. } => EmdynStatus::NumericError,
            _ => EmdynStatus::InvalidState,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EmdynStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(EmdynStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EmdynStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EmdynStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            EmdynStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(p: *const EmdynState) -> Result<&'a DensityMatrix, Failure> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null("state"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn boxed_state(rho: DensityMatrix) -> *mut EmdynState {
    Box::into_raw(Box::new(EmdynState(rho)))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn family_kind(f: EmdynFamily) -> FamilyKind {
    match f {
        EmdynFamily::PurePhi => FamilyKind::PurePhi,
        EmdynFamily::PurePsi => FamilyKind::PurePsi,
        EmdynFamily::WernerPhi => FamilyKind::WernerPhi,
        EmdynFamily::WernerPsi => FamilyKind::WernerPsi,
    }
}

fn critical(t: CriticalTime) -> EmdynCriticalTime {
    match t {
        CriticalTime::Finite(tau) => EmdynCriticalTime {
            kind: EmdynTimeKind::Finite,
            tau,
        },
        CriticalTime::Asymptotic => EmdynCriticalTime {
            kind: EmdynTimeKind::Asymptotic,
            tau: f64::NAN,
        },
        CriticalTime::Immediate => EmdynCriticalTime {
            kind: EmdynTimeKind::Immediate,
            tau: f64::NAN,
        },
    }
}

fn row(r: &TrajectoryRow) -> EmdynRow {
    let nan = f64::NAN;
    EmdynRow {
        tau: r.tau,
        concurrence: r.concurrence,
        m: r.m,
        c1: r.c1.unwrap_or(nan),
        c2: r.c2.unwrap_or(nan),
        u1: r.u1.unwrap_or(nan),
        u2: r.u2.unwrap_or(nan),
        has_x_terms: r.c1.is_some(),
        entangled: r.entangled,
        violates: r.violates,
    }
}

fn check_tau(tau: f64) -> Result<f64, Failure> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(tau)
    } else {
        Err(invalid(format!("tau must be finite and non-negative, got {tau}")))
    }
}

/// Message describing the last failure on this thread, or null if the last
/// call succeeded. The pointer stays valid until the next call into this
/// library on the same thread.
#[no_mangle]
pub extern "C" fn emdyn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn emdyn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Initial state of a family. `sign_minus` selects the minus Bell state for
/// Werner families and is ignored for pure ones.
///
/// # Safety
/// `out` must be null or valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn emdyn_state_from_family(
    family: EmdynFamily,
    param: f64,
    sign_minus: bool,
    out: *mut *mut EmdynState,
) -> EmdynStatus {
    guard(|| {
        let sign = if sign_minus { Sign::Minus } else { Sign::Plus };
        let rho = Family::new(family_kind(family), param).initial_state_with_sign(sign)?;
        write_out(out, boxed_state(rho))
    })
}

/// State from 32 doubles (see the crate conventions), validated.
///
/// # Safety
/// `re_im` must be null or point to 32 readable doubles; `out` must be null
/// or valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn emdyn_state_from_matrix(re_im: *const f64, out: *mut *mut EmdynState) -> EmdynStatus {
    guard(|| {
        if re_im.is_null() {
            return Err(null("matrix data"));
        }
        let data = std::slice::from_raw_parts(re_im, 32);
        let m = CMatrix4::from_fn(|i, j| {
            let k = 2 * (4 * i + j);
            emdyn::linalg::ONE.scale(data[k]) + emdyn::linalg::I.scale(data[k + 1])
        });
        write_out(out, boxed_state(DensityMatrix::new(m)?))
    })
}

/// State from the JSON format `{"matrix": [[[re, im], ...], ...]}`.
///
/// # Safety
/// `json` must be null or a nul-terminated string; `out` must be null or
/// valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn emdyn_state_from_json(json: *const c_char, out: *mut *mut EmdynState) -> EmdynStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(EmdynStatus::ParseError, e.to_string()))?;
        write_out(out, boxed_state(DensityMatrix::from_json(text)?))
    })
}

/// Serializes a state to JSON; free the result with [`emdyn_string_free`].
///
/// # Safety
/// `state` must be null or a live handle; `out` must be null or valid for
/// writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn emdyn_state_to_json(state: *const EmdynState, out: *mut *mut c_char) -> EmdynStatus {
    guard(|| {
        let rho = state_ref(state)?;
        write_out(out, c_string(rho.to_json()))
    })
}

/// Copies the matrix into 32 doubles.
///
/// # Safety
/// `state` must be null or a live handle; `re_im` must be null or point to
/// 32 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn emdyn_state_get_matrix(state: *const EmdynState, re_im: *mut f64) -> EmdynStatus {
    guard(|| {
        let rho = state_ref(state)?;
        if re_im.is_null() {
            return Err(null("output buffer"));
        }
        let out = std::slice::from_raw_parts_mut(re_im, 32);
        for i in 0..4 {
            for j in 0..4 {
                let z = rho.get(i, j);
                out[2 * (4 * i + j)] = z.re;
                out[2 * (4 * i + j) + 1] = z.im;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emdyn_state_free(state: *mut EmdynState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Closed-form propagation of identical atoms to dimensionless time `tau`.
///
/// # Safety
/// `state` must be null or a live handle; `out` must be null or valid for
/// writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn emdyn_state_propagate(
    state: *const EmdynState,
    tau: f64,
    out: *mut *mut EmdynState,
) -> EmdynStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let tau = check_tau(tau)?;
        write_out(out, boxed_state(dynamics::exact_propagate(rho, tau)))
    })
}

/// RK4 integration with per-atom emission rates.
///
/// # Safety
/// `state` must be null or a live handle; `out` must be null or valid for
/// writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn emdyn_state_rk4(
    state: *const EmdynState,
    tau: f64,
    step: f64,
    gamma_a: f64,
    gamma_b: f64,
    out: *mut *mut EmdynState,
) -> EmdynStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let tau = check_tau(tau)?;
        if !(step.is_finite() && step > 0.0) {
            return Err(invalid(format!("step must be positive, got {step}")));
        }
        let rates = EmissionRates::new(gamma_a, gamma_b)?;
        write_out(out, boxed_state(dynamics::rk4_evolve(rho, tau, step, rates)))
    })
}

/// Wootters concurrence.
///
/// # Safety
/// `state` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn emdyn_concurrence(state: *const EmdynState, out: *mut f64) -> EmdynStatus {
    guard(|| {
        let c = emdyn::entanglement::concurrence(state_ref(state)?)?;
        write_out(out, c.value())
    })
}

/// CHSH quantity `m`; the state violates some CHSH inequality iff `m > 1`.
///
/// # Safety
/// `state` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn emdyn_m_value(state: *const EmdynState, out: *mut f64) -> EmdynStatus {
    guard(|| {
        let m = emdyn::chsh::m_value(state_ref(state)?)?;
        write_out(out, m.value())
    })
}

/// Numeric disentanglement time of an arbitrary initial state.
///
/// # Safety
/// `state` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn emdyn_disentanglement_time(
    state: *const EmdynState,
    out: *mut EmdynCriticalTime,
) -> EmdynStatus {
    guard(|| {
        let t = critical_times::disentanglement_time_numeric(state_ref(state)?)?;
        write_out(out, critical(t))
    })
}

/// Numeric locality time of an arbitrary initial state.
///
/// # Safety
/// `state` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn emdyn_locality_time(state: *const EmdynState, out: *mut EmdynCriticalTime) -> EmdynStatus {
    guard(|| {
        let t = critical_times::locality_time_numeric(state_ref(state)?)?;
        write_out(out, critical(t))
    })
}

/// Closed-form disentanglement time of a family member.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn emdyn_family_disentanglement_time(
    family: EmdynFamily,
    param: f64,
    out: *mut EmdynCriticalTime,
) -> EmdynStatus {
    guard(|| {
        let t = critical_times::disentanglement_time_closed(&Family::new(family_kind(family), param))?;
        write_out(out, critical(t))
    })
}

/// Closed-form locality time of a family member.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn emdyn_family_locality_time(
    family: EmdynFamily,
    param: f64,
    out: *mut EmdynCriticalTime,
) -> EmdynStatus {
    guard(|| {
        let t = critical_times::locality_time_closed(&Family::new(family_kind(family), param))?;
        write_out(out, critical(t))
    })
}

/// Samples `τ = 0, step, …, ≤ tau_max`.
///
/// # Safety
/// `state` must be null or a live handle; `out` must be null or valid for
/// writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn emdyn_trajectory_sample(
    state: *const EmdynState,
    tau_max: f64,
    step: f64,
    out: *mut *mut EmdynTrajectory,
) -> EmdynStatus {
    guard(|| {
        let t = Trajectory::sample(state_ref(state)?, tau_max, step)?;
        write_out(out, Box::into_raw(Box::new(EmdynTrajectory(t))))
    })
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn emdyn_trajectory_len(traj: *const EmdynTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.rows.len())
}

/// # Safety
/// `traj` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn emdyn_trajectory_row(
    traj: *const EmdynTrajectory,
    index: usize,
    out: *mut EmdynRow,
) -> EmdynStatus {
    guard(|| {
        let t = traj.as_ref().ok_or_else(|| null("trajectory"))?;
        let r =
            t.0.rows
                .get(index)
                .ok_or_else(|| invalid(format!("row {index} out of {}", t.0.rows.len())))?;
        write_out(out, row(r))
    })
}

/// CSV rendering; pass `gamma0 <= 0` for dimensionless time. Free the result
/// with [`emdyn_string_free`].
///
/// # Safety
/// `traj` must be null or a live handle; `out` must be null or valid for
/// writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn emdyn_trajectory_to_csv(
    traj: *const EmdynTrajectory,
    gamma0: f64,
    out: *mut *mut c_char,
) -> EmdynStatus {
    guard(|| {
        let t = traj.as_ref().ok_or_else(|| null("trajectory"))?;
        let g = (gamma0 > 0.0 && gamma0.is_finite()).then_some(gamma0);
        write_out(out, c_string(t.0.to_csv(g)))
    })
}

/// # Safety
/// `traj` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emdyn_trajectory_free(traj: *mut EmdynTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emdyn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
