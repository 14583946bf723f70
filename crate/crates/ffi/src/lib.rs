//! C ABI over `frame_qfi`.
//!
//! Every function returns an [`FqfiStatus`]; on failure the message is
//! available from [`fqfi_last_error`] on the same thread. States are opaque
//! handles released with [`fqfi_state_free`].

use std::cell::RefCell;
use std::ffi::CString;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use frame_qfi::estimation::{run_batch, ProtocolConfig};
use frame_qfi::noise::{dephased_trace_qfi_closed, depol_qfi_factor};
use frame_qfi::optimizer::{maximize_with, OptimizerConfig};
use frame_qfi::qfi::{
    ghz_crb_trace_inverse, goldberg_bound, haar_avg_trace_analytic, haar_avg_trace_mc, qfi_pure,
};
use frame_qfi::spin_algebra::{ghz_state, majorana_roots, EulerAngles, Spin, SpinState};
use frame_qfi::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqfiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularRotation = 3,
    SingularFisher = 4,
    DegenerateState = 5,
    DegenerateInversion = 6,
    InconsistentMoments = 7,
    NotConverged = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Pure-spin-state handle.
pub struct FqfiState(SpinState);

/// Aggregate of a batch of protocol runs. Undefined bounds are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FqfiProtocolSummary {
    pub batches: usize,
    pub failed: usize,
    pub mean_squared_error: [f64; 3],
    pub total_mean_squared_error: f64,
    pub total_mse_stderr: f64,
    pub crb_trace: f64,
    pub crb_per_shot: f64,
    /// 1 if the total MSE respects the bound with slack, 0 if not, -1 if undefined.
    pub respects_bound: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FqfiStatus {
    match e {
        Error::SingularRotation { .. } => FqfiStatus::SingularRotation,
        Error::SingularFisher { .. } => FqfiStatus::SingularFisher,
        Error::DegenerateState { .. } => FqfiStatus::DegenerateState,
        Error::DegenerateInversion { .. } => FqfiStatus::DegenerateInversion,
        Error::InconsistentMoments { .. } => FqfiStatus::InconsistentMoments,
        _ => FqfiStatus::InvalidArgument,
    }
}

fn fail(status: FqfiStatus, msg: impl Into<String>) -> FqfiStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<FqfiStatus, (FqfiStatus, String)>) -> FqfiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => fail(s, msg),
        Err(_) => fail(FqfiStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn st(self) -> Result<T, (FqfiStatus, String)>;
}

impl<T> OrStatus<T> for frame_qfi::Result<T> {
    fn st(self) -> Result<T, (FqfiStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null() -> (FqfiStatus, String) {
    (FqfiStatus::NullPointer, "null pointer argument".into())
}

fn invalid(msg: &str) -> (FqfiStatus, String) {
    (FqfiStatus::InvalidArgument, msg.into())
}

unsafe fn state_ref<'a>(s: *const FqfiState) -> Result<&'a SpinState, (FqfiStatus, String)> {
    s.as_ref().map(|s| &s.0).ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), (FqfiStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn check_p(p: f64) -> Result<(), (FqfiStatus, String)> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid("p must lie in [0, 1]"))
    }
}

/// Message for the last failing call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fqfi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `(|0..0> + e^{i delta} |1..1>)/sqrt(2)` on `n` qubits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fqfi_state_ghz(n: u32, delta: f64, out: *mut *mut FqfiState) -> FqfiStatus {
    guard(|| {
        let s = ghz_state(n, delta).st()?;
        write(out, Box::into_raw(Box::new(FqfiState(s))))?;
        Ok(FqfiStatus::Ok)
    })
}

/// State of spin `twice_j / 2` from `twice_j + 1` Dicke amplitudes (m = j first).
/// The vector is normalized.
///
/// # Safety
/// `re` and `im` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_state_from_amplitudes(
    twice_j: u32,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut FqfiState,
) -> FqfiStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let amps: Vec<Complex64> = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let spin = Spin::from_twice(twice_j);
        let s = SpinState::normalized(spin, amps.into()).st()?;
        write(out, Box::into_raw(Box::new(FqfiState(s))))?;
        Ok(FqfiStatus::Ok)
    })
}

/// # Safety
/// `state` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn fqfi_state_free(state: *mut FqfiState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// `2j + 1`, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fqfi_state_dim(state: *const FqfiState) -> usize {
    state.as_ref().map_or(0, |s| s.0.dim())
}

/// Copies the amplitudes into `re` and `im`, each of capacity `len >= dim`.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fqfi_state_amplitudes(
    state: *const FqfiState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> FqfiStatus {
    guard(|| {
        let s = state_ref(state)?;
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        if len < s.dim() {
            return Err((FqfiStatus::BufferTooSmall, format!("need {} entries", s.dim())));
        }
        for (k, a) in s.amplitudes().iter().enumerate() {
            *re.add(k) = a.re;
            *im.add(k) = a.im;
        }
        Ok(FqfiStatus::Ok)
    })
}

/// Pure-state QFI matrix in row-major order over (alpha, beta, gamma).
///
/// # Safety
/// `out` must point to 9 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fqfi_qfi_pure(
    state: *const FqfiState,
    alpha: f64,
    beta: f64,
    gamma: f64,
    out: *mut f64,
) -> FqfiStatus {
    guard(|| {
        let s = state_ref(state)?;
        if out.is_null() {
            return Err(null());
        }
        let rows = qfi_pure(s, &EulerAngles::new(alpha, beta, gamma)).rows();
        for (k, v) in rows.iter().flatten().enumerate() {
            *out.add(k) = *v;
        }
        Ok(FqfiStatus::Ok)
    })
}

/// Haar average of `Tr F` from the spin moments.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_haar_analytic(state: *const FqfiState, out: *mut f64) -> FqfiStatus {
    guard(|| {
        let s = state_ref(state)?;
        write(out, haar_avg_trace_analytic(s).value)?;
        Ok(FqfiStatus::Ok)
    })
}

/// Monte Carlo Haar average over `n_samples >= 100` rotations.
///
/// # Safety
/// `value` and `stderr` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_haar_mc(
    state: *const FqfiState,
    n_samples: usize,
    seed: u64,
    value: *mut f64,
    stderr: *mut f64,
) -> FqfiStatus {
    guard(|| {
        let s = state_ref(state)?;
        let avg = haar_avg_trace_mc(s, n_samples, seed).st()?;
        write(value, avg.value)?;
        write(stderr, avg.stderr)?;
        Ok(FqfiStatus::Ok)
    })
}

/// `Tr F^{-1}` of the rotated `n`-qubit GHZ probe.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_ghz_crb_trace_inverse(n: u32, beta: f64, out: *mut f64) -> FqfiStatus {
    guard(|| {
        write(out, ghz_crb_trace_inverse(n, beta).st()?)?;
        Ok(FqfiStatus::Ok)
    })
}

/// Anti-coherent comparison bound `3/(N(N+1)) (1 + 2/sin^2 beta)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_goldberg_bound(n: u32, beta: f64, out: *mut f64) -> FqfiStatus {
    guard(|| {
        write(out, goldberg_bound(n, beta).st()?)?;
        Ok(FqfiStatus::Ok)
    })
}

/// `Tr F` of the dephased GHZ probe, `N(1 + sin^2 b) + p^2 N^2 (1 + cos^2 b)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_dephased_trace_qfi(n: u32, p: f64, beta: f64, out: *mut f64) -> FqfiStatus {
    guard(|| {
        check_p(p)?;
        if n == 0 {
            return Err(invalid("N must be at least 1"));
        }
        write(out, dephased_trace_qfi_closed(n, p, beta))?;
        Ok(FqfiStatus::Ok)
    })
}

/// Exact factor multiplying the QFI under depolarizing noise of strength `p`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_depolarizing_factor(n: u32, p: f64, out: *mut f64) -> FqfiStatus {
    guard(|| {
        write(out, depol_qfi_factor(n, p).st()?.exact)?;
        Ok(FqfiStatus::Ok)
    })
}

/// Majorana points as polar and azimuthal angles; capacity `len >= 2j`.
/// `count` receives `2j`.
///
/// # Safety
/// `theta` and `phi` must point to `len` writable doubles; `count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_majorana(
    state: *const FqfiState,
    theta: *mut f64,
    phi: *mut f64,
    len: usize,
    count: *mut usize,
) -> FqfiStatus {
    guard(|| {
        let s = state_ref(state)?;
        let pts = majorana_roots(s).st()?;
        write(count, pts.len())?;
        if theta.is_null() || phi.is_null() {
            return Err(null());
        }
        if len < pts.len() {
            return Err((FqfiStatus::BufferTooSmall, format!("need {} entries", pts.len())));
        }
        for (k, p) in pts.points.iter().enumerate() {
            *theta.add(k) = p.theta;
            *phi.add(k) = p.phi;
        }
        Ok(FqfiStatus::Ok)
    })
}

/// Maximizes the Haar-averaged `Tr F` over spin-`twice_j/2` states.
///
/// The best state and value are written even when no restart converged, in
/// which case the status is `NotConverged`.
///
/// # Safety
/// `value` and `best` must be valid; `*best` must be freed by the caller.
#[no_mangle]
pub unsafe extern "C" fn fqfi_maximize(
    twice_j: u32,
    restarts: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
    value: *mut f64,
    best: *mut *mut FqfiState,
) -> FqfiStatus {
    guard(|| {
        if value.is_null() || best.is_null() {
            return Err(null());
        }
        let cfg = OptimizerConfig { restarts, tol, max_iter, seed };
        let res = maximize_with(Spin::from_twice(twice_j), &cfg).st()?;
        write(value, res.best_value)?;
        write(best, Box::into_raw(Box::new(FqfiState(res.best_state))))?;
        if res.converged {
            Ok(FqfiStatus::Ok)
        } else {
            set_error(format!("no restart converged within {max_iter} iterations"));
            Ok(FqfiStatus::NotConverged)
        }
    })
}

/// Runs `batches` independent estimation runs of the GHZ protocol with
/// `shots` per spin setting and `3 shots` parity shots.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqfi_run_protocol(
    n: u32,
    alpha: f64,
    beta: f64,
    gamma: f64,
    shots: usize,
    batches: usize,
    seed: u64,
    out: *mut FqfiProtocolSummary,
) -> FqfiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let angles = EulerAngles::new(alpha, beta, gamma);
        let res = run_batch(&angles, n, &ProtocolConfig::new(shots), batches, seed).st()?;
        let s = res.summary;
        write(
            out,
            FqfiProtocolSummary {
                batches: s.batches,
                failed: s.failed,
                mean_squared_error: s.mean_squared_error,
                total_mean_squared_error: s.total_mean_squared_error,
                total_mse_stderr: s.total_mse_stderr,
                crb_trace: s.crb_trace.unwrap_or(f64::NAN),
                crb_per_shot: s.crb_per_shot.unwrap_or(f64::NAN),
                respects_bound: s.respects_bound.map_or(-1, i32::from),
            },
        )?;
        Ok(FqfiStatus::Ok)
    })
}
