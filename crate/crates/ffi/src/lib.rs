//! C ABI over `cho-core`.
//!
//! Every fallible function returns a [`ChoStatus`]; on failure the message is
//! available from [`cho_last_error_message`] on the same thread. Objects are
//! opaque handles created by `*_new`/`*_project`/`*_integrate` and released
//! with the matching `*_free`. Results are written through out-pointers,
//! which are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cho_core::bohmian::{guidance_field, integrate_trajectory, TrajectorySample};
use cho_core::model::{ModeIndex, OscillatorParams};
use cho_core::observables::{energy_expectations_quadrature, marginal_closed_form, NormalModeQuadrature, Particle};
use cho_core::ode::SolverOptions;
use cho_core::spectral::{project_initial_state, FirstOrderForm, SpectralState, Truncation};
use cho_core::Error;

/// Result code of every fallible call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An enum or size argument was out of range.
    InvalidArgument = 2,
    /// Physical parameters or truncation rejected.
    InvalidParams = 3,
    /// Quadrature order out of range or unstable under refinement.
    Quadrature = 4,
    /// The guidance field is singular at the requested point or along the path.
    Singularity = 5,
    /// Integrator failure other than a singularity.
    Numerical = 6,
    /// Rust panic caught at the boundary; the library state is still valid.
    Panic = 7,
}

/// Particle selector for marginals.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoParticle {
    One = 1,
    Two = 2,
}

/// Sign convention of the first-order closed form.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoForm {
    Corrected = 0,
    Flipped = 1,
}

/// Normal-mode and beat frequencies (fs⁻¹) and the coupling ratio `2λ/k`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ChoFrequencies {
    pub omega: f64,
    pub omega_prime: f64,
    pub delta_omega: f64,
    pub omega_bar: f64,
    pub epsilon: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ChoEnergies {
    pub t: f64,
    pub e1: f64,
    pub e2: f64,
    pub e_interaction: f64,
    pub e_total: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ChoPoint {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
}

/// Oscillator parameters.
pub struct ChoParams {
    inner: OscillatorParams,
}

/// Truncated eigenmode expansion of the evolving state.
pub struct ChoState {
    inner: SpectralState,
}

/// Integrated Bohmian trajectory with dense output.
pub struct ChoTrajectory {
    inner: TrajectorySample,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ChoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidParams(_) | Error::Config(_) | Error::Json(_) | Error::Io(_) => ChoStatus::InvalidParams,
            Error::QuadratureOrder { .. } | Error::QuadratureUnstable { .. } => ChoStatus::Quadrature,
            Error::Singularity { .. } | Error::UndefinedPhase { .. } => ChoStatus::Singularity,
            Error::Ode(_) => ChoStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn call<F: FnOnce() -> Result<(), Failure>>(f: F) -> ChoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChoStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            ChoStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(ChoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cho_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a nul"),
    };
    VERSION.as_ptr()
}

/// Message of the last failed call on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cho_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates parameters from `m`, `k`, `λ` and `ħ` (mₑ, Å, fs units).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cho_params_new(m: f64, k: f64, lambda: f64, hbar: f64, out: *mut *mut ChoParams) -> ChoStatus {
    call(|| {
        let inner = OscillatorParams::new(m, k, lambda, hbar)?;
        put(out, Box::into_raw(Box::new(ChoParams { inner })), "out")
    })
}

/// Creates parameters from `m`, `ω̄`, `δω/ω̄` and `ħ`.
///
/// # Safety
/// As for [`cho_params_new`].
#[no_mangle]
pub unsafe extern "C" fn cho_params_from_beat(
    m: f64,
    omega_bar: f64,
    delta_ratio: f64,
    hbar: f64,
    out: *mut *mut ChoParams,
) -> ChoStatus {
    call(|| {
        let inner = OscillatorParams::from_beat(m, omega_bar, delta_ratio, hbar)?;
        put(out, Box::into_raw(Box::new(ChoParams { inner })), "out")
    })
}

/// # Safety
/// `params` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cho_params_free(params: *mut ChoParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_params_frequencies(params: *const ChoParams, out: *mut ChoFrequencies) -> ChoStatus {
    call(|| {
        let f = get(params, "params")?.inner.frequencies();
        let value = ChoFrequencies {
            omega: f.omega,
            omega_prime: f.omega_prime,
            delta_omega: f.delta_omega,
            omega_bar: f.omega_bar,
            epsilon: f.epsilon,
        };
        put(out, value, "out")
    })
}

/// Projects the initial state onto modes `n ≤ n_max`, `n′ ≤ n_prime_max`.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_state_project(
    params: *const ChoParams,
    n_max: u32,
    n_prime_max: u32,
    out: *mut *mut ChoState,
) -> ChoStatus {
    call(|| {
        let p = get(params, "params")?;
        if n_max > 40 || n_prime_max > 80 {
            return Err(Failure(ChoStatus::InvalidArgument, format!("truncation ({n_max}, {n_prime_max}) too large")));
        }
        let inner = project_initial_state(&p.inner, Truncation::new(n_max, n_prime_max))?;
        put(out, Box::into_raw(Box::new(ChoState { inner })), "out")
    })
}

/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cho_state_free(state: *mut ChoState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// `C_{n,n′}`; zero outside the truncation.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_state_coefficient(state: *const ChoState, n: u32, n_prime: u32, out: *mut f64) -> ChoStatus {
    call(|| {
        let s = get(state, "state")?;
        put(out, s.inner.coefficient(ModeIndex { n, n_prime }), "out")
    })
}

/// Estimated norm outside the truncation.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_state_tail_bound(state: *const ChoState, out: *mut f64) -> ChoStatus {
    call(|| put(out, get(state, "state")?.inner.tail_bound, "out"))
}

/// `ψ(x₁, x₂, t)` as real and imaginary parts.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_state_eval(
    state: *const ChoState,
    x1: f64,
    x2: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> ChoStatus {
    call(|| {
        let s = get(state, "state")?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let v = s.inner.eval(x1, x2, t).value;
        re.write(v.re);
        im.write(v.im);
        Ok(())
    })
}

/// Quadrature energy expectations of the state at time `t`.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_state_energies(state: *const ChoState, t: f64, out: *mut ChoEnergies) -> ChoStatus {
    call(|| {
        let s = get(state, "state")?;
        let quad = NormalModeQuadrature::with_default_order(&s.inner.params)?;
        let r = energy_expectations_quadrature(&s.inner, t, &quad);
        let value = ChoEnergies {
            t,
            e1: r.e1,
            e2: r.e2,
            e_interaction: r.e_interaction,
            e_total: r.e_total,
        };
        put(out, value, "out")
    })
}

/// Closed-form first-order marginal density `P(x, t)` of one particle.
///
/// `particle` is a [`ChoParticle`] value and `form` a [`ChoForm`] value.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_marginal_closed_form(
    params: *const ChoParams,
    particle: i32,
    form: i32,
    x: f64,
    t: f64,
    out: *mut f64,
) -> ChoStatus {
    call(|| {
        let p = get(params, "params")?;
        let which = match particle {
            1 => Particle::One,
            2 => Particle::Two,
            _ => return Err(Failure(ChoStatus::InvalidArgument, format!("particle must be 1 or 2, got {particle}"))),
        };
        let form = match form {
            0 => FirstOrderForm::Corrected,
            1 => FirstOrderForm::Flipped,
            _ => return Err(Failure(ChoStatus::InvalidArgument, format!("form must be 0 or 1, got {form}"))),
        };
        put(out, marginal_closed_form(which, x, t, &p.inner, &p.inner.frequencies(), form), "out")
    })
}

/// Reduced Bohmian velocity at `(x₁, x₂, t)`.
///
/// # Safety
/// `params` must be a live handle; `v1` and `v2` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_guidance_velocity(
    params: *const ChoParams,
    x1: f64,
    x2: f64,
    t: f64,
    v1: *mut f64,
    v2: *mut f64,
) -> ChoStatus {
    call(|| {
        let p = get(params, "params")?;
        if v1.is_null() || v2.is_null() {
            return Err(null("v1/v2"));
        }
        let v = guidance_field(x1, x2, t, &p.inner, &p.inner.frequencies())?;
        v1.write(v[0]);
        v2.write(v[1]);
        Ok(())
    })
}

/// Integrates the reduced guidance equations from `(x1, x2)` at `t = 0` to
/// `t_end`.
///
/// On [`ChoStatus::Singularity`], `last_good_t` (if non-null) receives the
/// last time the path was well defined.
///
/// # Safety
/// `params` must be a live handle, `out` writable, `last_good_t` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cho_trajectory_integrate(
    params: *const ChoParams,
    x1: f64,
    x2: f64,
    t_end: f64,
    rtol: f64,
    atol: f64,
    out: *mut *mut ChoTrajectory,
    last_good_t: *mut f64,
) -> ChoStatus {
    call(|| {
        let p = get(params, "params")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !(rtol > 0.0 && atol > 0.0 && rtol < 1.0 && t_end > 0.0 && t_end.is_finite()) {
            return Err(Failure(ChoStatus::InvalidArgument, "need t_end > 0 and 0 < rtol < 1, atol > 0".into()));
        }
        let opts = SolverOptions::with_tolerances(rtol, atol);
        match integrate_trajectory((x1, x2), (0.0, t_end), &opts, &p.inner) {
            Ok(inner) => {
                out.write(Box::into_raw(Box::new(ChoTrajectory { inner })));
                Ok(())
            }
            Err(e) => {
                if let (Error::Singularity { last_good_t: t, .. }, false) = (&e, last_good_t.is_null()) {
                    last_good_t.write(*t);
                }
                Err(e.into())
            }
        }
    })
}

/// # Safety
/// `traj` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cho_trajectory_free(traj: *mut ChoTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Dense-output position at time `t` inside the integrated span.
///
/// # Safety
/// `traj` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_trajectory_eval(traj: *const ChoTrajectory, t: f64, out: *mut ChoPoint) -> ChoStatus {
    call(|| {
        let tr = get(traj, "traj")?;
        let s = tr.inner.eval(t).ok_or_else(|| {
            let (a, b) = tr.inner.t_span();
            Failure(ChoStatus::InvalidArgument, format!("t = {t} outside [{a}, {b}]"))
        })?;
        put(out, ChoPoint { t: s.t, x1: s.x1, x2: s.x2 }, "out")
    })
}

/// Number of accepted integrator states, including the start.
///
/// # Safety
/// `traj` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_trajectory_len(traj: *const ChoTrajectory, out: *mut usize) -> ChoStatus {
    call(|| put(out, get(traj, "traj")?.inner.states.len(), "out"))
}

/// Copies up to `capacity` accepted states into `buf`; `written` receives
/// the count copied.
///
/// # Safety
/// `traj` must be a live handle, `buf` valid for `capacity` writes and
/// `written` writable.
#[no_mangle]
pub unsafe extern "C" fn cho_trajectory_states(
    traj: *const ChoTrajectory,
    buf: *mut ChoPoint,
    capacity: usize,
    written: *mut usize,
) -> ChoStatus {
    call(|| {
        let tr = get(traj, "traj")?;
        if written.is_null() || (buf.is_null() && capacity > 0) {
            return Err(null("buf/written"));
        }
        let n = capacity.min(tr.inner.states.len());
        for (i, s) in tr.inner.states.iter().take(n).enumerate() {
            buf.add(i).write(ChoPoint { t: s.t, x1: s.x1, x2: s.x2 });
        }
        written.write(n);
        Ok(())
    })
}
