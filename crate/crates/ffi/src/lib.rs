//! C ABI over `isokappa`.
//!
//! Every function returns an [`IsoStatus`] and writes results through out
//! pointers. Objects are opaque and owned by the caller, who releases them
//! with the matching `*_free`. After a non-`Ok` status,
//! [`iso_last_error_message`] describes the failure on the calling thread.

use isokappa::classical::{self, ClassicalError, TrajectoryCoeffs};
use isokappa::model::{self, ModelError, SystemParams};
use isokappa::slsolver::QuadError;
use isokappa::spectrum::{self, BoundState, SpectrumError, SpectrumSummary};
use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    DomainViolation = 3,
    /// The requested level is not square integrable.
    Normalizability = 4,
    Divergent = 5,
    NonConvergent = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Classical trajectory family.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoFamily {
    Trig = 0,
    Hyperbolic = 1,
    Border = 2,
}

/// Physical parameters `(m, α, κ, k_g, ħ)`.
pub struct IsoSystem {
    params: SystemParams,
}

/// Lowest levels of a system.
pub struct IsoSpectrum {
    summary: SpectrumSummary,
}

/// One normalized eigenstate.
pub struct IsoBoundState {
    state: BoundState,
}

/// Closed-form classical trajectory.
pub struct IsoTrajectory {
    coeffs: TrajectoryCoeffs,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(IsoStatus, String);

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let status = match e {
            ModelError::InvalidParameter { .. } => IsoStatus::InvalidParameter,
            ModelError::DomainViolation { .. } => IsoStatus::DomainViolation,
        };
        Failure(status, e.to_string())
    }
}

impl From<SpectrumError> for Failure {
    fn from(e: SpectrumError) -> Self {
        let status = match &e {
            SpectrumError::NormalizabilityViolation { .. } => IsoStatus::Normalizability,
            SpectrumError::Quadrature(QuadError::Divergent { .. }) => IsoStatus::Divergent,
            SpectrumError::Quadrature(_) => IsoStatus::NonConvergent,
            SpectrumError::Model(ModelError::DomainViolation { .. }) => IsoStatus::DomainViolation,
            _ => IsoStatus::InvalidParameter,
        };
        Failure(status, e.to_string())
    }
}

impl From<ClassicalError> for Failure {
    fn from(e: ClassicalError) -> Self {
        let status = match &e {
            ClassicalError::Model(ModelError::DomainViolation { .. }) | ClassicalError::NonPositiveRadicand { .. } => {
                IsoStatus::DomainViolation
            }
            _ => IsoStatus::InvalidParameter,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(IsoStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure, and converts panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IsoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            IsoStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            IsoStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_boxed<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn free<T>(ptr: *mut T) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Copies the last error message of this thread into `buf` (NUL terminated,
/// truncated to `len - 1` bytes) and returns the full message length.
/// With `buf` null or `len` 0 only the length is returned.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn iso_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn iso_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn iso_system_new(
    mass: f64,
    alpha: f64,
    kappa: f64,
    k_g: f64,
    hbar: f64,
    out: *mut *mut IsoSystem,
) -> IsoStatus {
    guard(|| {
        let params = SystemParams::new(mass, alpha, kappa, k_g, hbar)?;
        put_boxed(out, IsoSystem { params })
    })
}

/// # Safety
/// `system` must be null or come from `iso_system_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn iso_system_free(system: *mut IsoSystem) {
    free(system)
}

/// Dimensionless scale `μ`, deformation `κ'` and isotonic index `g`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_system_dimensionless(
    system: *const IsoSystem,
    mu: *mut f64,
    kappa_prime: *mut f64,
    g: *mut f64,
) -> IsoStatus {
    guard(|| {
        let dp = model::nondimensionalize(&get(system, "system")?.params)?;
        put(mu, dp.mu, "mu")?;
        put(kappa_prime, dp.kappa_prime, "kappa_prime")?;
        put(g, dp.g, "g")
    })
}

/// `V(x)`; `DomainViolation` outside `x² < 1/κ` or at the core singularity.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_system_potential(system: *const IsoSystem, x: f64, out: *mut f64) -> IsoStatus {
    guard(|| {
        let v = model::potential(x, &get(system, "system")?.params)?;
        put(out, v, "out")
    })
}

/// Physical energy `E_n` without normalizing the state.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_system_energy(system: *const IsoSystem, n: usize, out: *mut f64) -> IsoStatus {
    guard(|| {
        let p = &get(system, "system")?.params;
        let dp = model::nondimensionalize(p)?;
        let e = spectrum::energy_level(n, dp.kappa_prime, dp.g)?;
        put(out, model::energy_to_physical(p, e), "out")
    })
}

/// Number of bound states. For an unbounded spectrum `*finite` is 0 and
/// `*count` is `SIZE_MAX`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_system_bound_state_count(
    system: *const IsoSystem,
    count: *mut usize,
    finite: *mut bool,
) -> IsoStatus {
    guard(|| {
        let dp = model::nondimensionalize(&get(system, "system")?.params)?;
        let (c, f) = if dp.kappa_prime < 0.0 {
            (spectrum::count_bound_states(dp.kappa_prime, dp.g)?, true)
        } else {
            (usize::MAX, false)
        };
        put(count, c, "count")?;
        put(finite, f, "finite")
    })
}

/// Up to `n_request` lowest normalized levels.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_spectrum_new(
    system: *const IsoSystem,
    n_request: usize,
    out: *mut *mut IsoSpectrum,
) -> IsoStatus {
    guard(|| {
        let summary = spectrum::spectrum_summary(&get(system, "system")?.params, n_request)?;
        put_boxed(out, IsoSpectrum { summary })
    })
}

/// # Safety
/// `spectrum` must be null or come from `iso_spectrum_new`.
#[no_mangle]
pub unsafe extern "C" fn iso_spectrum_free(spectrum: *mut IsoSpectrum) {
    free(spectrum)
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_spectrum_len(spectrum: *const IsoSpectrum, out: *mut usize) -> IsoStatus {
    guard(|| put(out, get(spectrum, "spectrum")?.summary.levels.len(), "out"))
}

fn level(s: &IsoSpectrum, i: usize) -> Result<&BoundState, Failure> {
    s.summary.levels.get(i).ok_or_else(|| {
        Failure(
            IsoStatus::InvalidParameter,
            format!("level {i} out of range ({} levels)", s.summary.levels.len()),
        )
    })
}

/// Physical energy of level `i`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_spectrum_energy(spectrum: *const IsoSpectrum, i: usize, out: *mut f64) -> IsoStatus {
    guard(|| put(out, level(get(spectrum, "spectrum")?, i)?.energy_physical, "out"))
}

/// Copies up to `len` energies into `buf`; `*written` receives the count.
///
/// # Safety
/// `buf` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn iso_spectrum_energies(
    spectrum: *const IsoSpectrum,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> IsoStatus {
    guard(|| {
        let levels = &get(spectrum, "spectrum")?.summary.levels;
        let n = levels.len().min(len);
        if n > 0 && buf.is_null() {
            return Err(null("buf"));
        }
        for (i, l) in levels.iter().take(n).enumerate() {
            buf.add(i).write(l.energy_physical);
        }
        put(written, n, "written")
    })
}

/// Copies level `i` out as an independent state.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_spectrum_state(
    spectrum: *const IsoSpectrum,
    i: usize,
    out: *mut *mut IsoBoundState,
) -> IsoStatus {
    guard(|| {
        let state = level(get(spectrum, "spectrum")?, i)?.clone();
        put_boxed(out, IsoBoundState { state })
    })
}

/// Normalized level `n`; `Normalizability` when it is not square integrable.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_bound_state_new(
    system: *const IsoSystem,
    n: usize,
    out: *mut *mut IsoBoundState,
) -> IsoStatus {
    guard(|| {
        let state = BoundState::for_system(&get(system, "system")?.params, n)?;
        put_boxed(out, IsoBoundState { state })
    })
}

/// # Safety
/// `state` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn iso_bound_state_free(state: *mut IsoBoundState) {
    free(state)
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_bound_state_energy(state: *const IsoBoundState, out: *mut f64) -> IsoStatus {
    guard(|| put(out, get(state, "state")?.state.energy_physical, "out"))
}

/// Normalization constant `N_n`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_bound_state_norm(state: *const IsoBoundState, out: *mut f64) -> IsoStatus {
    guard(|| put(out, get(state, "state")?.state.norm, "out"))
}

/// `Ψ_n(x)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_bound_state_wavefunction(state: *const IsoBoundState, x: f64, out: *mut f64) -> IsoStatus {
    guard(|| {
        let v = get(state, "state")?.state.wavefunction(x)?;
        put(out, v, "out")
    })
}

/// Closed-form trajectory. `parameter` is the amplitude `A` for the trig
/// and hyperbolic families and the linear coefficient `B` for the border;
/// `phase` is ignored for the border.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_trajectory_new(
    system: *const IsoSystem,
    family: IsoFamily,
    parameter: f64,
    phase: f64,
    out: *mut *mut IsoTrajectory,
) -> IsoStatus {
    guard(|| {
        let p = &get(system, "system")?.params;
        let coeffs = match family {
            IsoFamily::Trig => classical::solve_trig(parameter, phase, p)?,
            IsoFamily::Hyperbolic => classical::solve_hyperbolic(parameter, phase, p)?,
            IsoFamily::Border => classical::solve_border(parameter, p)?,
        };
        put_boxed(out, IsoTrajectory { coeffs })
    })
}

/// # Safety
/// `trajectory` must be null or come from `iso_trajectory_new`.
#[no_mangle]
pub unsafe extern "C" fn iso_trajectory_free(trajectory: *mut IsoTrajectory) {
    free(trajectory)
}

/// Position and velocity at time `t`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_trajectory_state(
    trajectory: *const IsoTrajectory,
    t: f64,
    x: *mut f64,
    v: *mut f64,
) -> IsoStatus {
    guard(|| {
        let s = get(trajectory, "trajectory")?.coeffs.phase_point(t)?;
        put(x, s.x, "x")?;
        put(v, s.v, "v")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_trajectory_energy(trajectory: *const IsoTrajectory, out: *mut f64) -> IsoStatus {
    guard(|| put(out, get(trajectory, "trajectory")?.coeffs.energy(), "out"))
}

/// Frequency `ω` (trig) or `Ω` (hyperbolic) and the kinematic period of
/// `x(t)`; both are NaN where undefined.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn iso_trajectory_frequency(
    trajectory: *const IsoTrajectory,
    omega: *mut f64,
    period: *mut f64,
) -> IsoStatus {
    guard(|| {
        let c = &get(trajectory, "trajectory")?.coeffs;
        put(omega, c.omega().unwrap_or(f64::NAN), "omega")?;
        put(period, c.period().unwrap_or(f64::NAN), "period")
    })
}
