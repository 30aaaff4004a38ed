//! C ABI over the simulator.
//!
//! Handles are opaque. Every fallible function returns an [`MpsStatus`];
//! on failure the message is kept per thread and can be copied out with
//! [`mps_last_error`]. Panics are caught at the boundary and reported as
//! [`MpsStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use micropolar::cli::{initial_state, run_suite, RunConfig, Suite};
use micropolar::dissipation::{g_by_label, g_condition_partial_integral, GCondition};
use micropolar::dynamics::{write_checkpoint, ModelSpec, State, Stepper, StepperConfig};
use micropolar::spectral::{make_grid, sobolev_seminorm};
use micropolar::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MpsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    NumericalAbort = 4,
    IoError = 5,
    FormatError = 6,
    PropertyFailed = 7,
    Panic = 8,
}

/// A running simulation.
pub struct MpsSimulation {
    spec: ModelSpec,
    cfg: StepperConfig,
    stepper: Stepper,
    state: State,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> MpsStatus {
    match e {
        Error::Config { .. } => MpsStatus::ConfigError,
        Error::Format { .. } => MpsStatus::FormatError,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => MpsStatus::IoError,
        e if e.is_numerical_abort() => MpsStatus::NumericalAbort,
        _ => MpsStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), MpsStatus>) -> MpsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MpsStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            MpsStatus::Panic
        }
    }
}

fn lib<T>(r: micropolar::Result<T>) -> Result<T, MpsStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, MpsStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        return Err(MpsStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{name} is not valid UTF-8"));
        MpsStatus::InvalidArgument
    })
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, MpsStatus> {
    p.as_mut().ok_or_else(|| {
        set_error(format!("{name} is null"));
        MpsStatus::NullPointer
    })
}

unsafe fn sim_ref<'a>(p: *const MpsSimulation) -> Result<&'a MpsSimulation, MpsStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("simulation handle is null");
        MpsStatus::NullPointer
    })
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the length the full message needs,
/// including the terminator. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mps_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Build a simulation from configuration text in the `key = value` format
/// used by `mpsim`. The handle must be released with
/// [`mps_simulation_destroy`].
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mps_simulation_create(config: *const c_char, out: *mut *mut MpsSimulation) -> MpsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let cfg: RunConfig = lib(str_arg(config, "config")?.parse())?;
        let spec = lib(cfg.model_spec())?;
        let scfg = cfg.stepper_config();
        lib(scfg.validate())?;
        let grid = lib(make_grid(spec.dim(), cfg.n))?;
        let state = lib(initial_state(&cfg, &grid, &spec))?;
        let stepper = lib(Stepper::new(&grid, &spec, cfg.galerkin_cutoff(), scfg.clone()))?;
        *out = Box::into_raw(Box::new(MpsSimulation {
            spec,
            cfg: scfg,
            stepper,
            state,
        }));
        Ok(())
    })
}

/// Advance by `steps` steps of the configured `dt`. On error the handle
/// keeps the last good state.
///
/// # Safety
/// `sim` must come from [`mps_simulation_create`].
#[no_mangle]
pub unsafe extern "C" fn mps_simulation_step(sim: *mut MpsSimulation, steps: u64) -> MpsStatus {
    guard(|| {
        let sim = out_arg(sim, "simulation handle")?;
        for _ in 0..steps {
            sim.state = lib(sim.stepper.step(&sim.state))?;
        }
        Ok(())
    })
}

/// # Safety
/// `sim` must come from [`mps_simulation_create`]; `t` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mps_simulation_time(sim: *const MpsSimulation, t: *mut f64) -> MpsStatus {
    guard(|| {
        *out_arg(t, "t")? = sim_ref(sim)?.state.t;
        Ok(())
    })
}

/// `½‖u‖₂²` and `½‖w‖₂²`.
///
/// # Safety
/// `sim` must come from [`mps_simulation_create`]; outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn mps_simulation_energy(
    sim: *const MpsSimulation,
    kinetic: *mut f64,
    micro: *mut f64,
) -> MpsStatus {
    guard(|| {
        let s = &sim_ref(sim)?.state;
        let k = out_arg(kinetic, "kinetic")?;
        let m = out_arg(micro, "micro")?;
        *k = 0.5 * sobolev_seminorm(&s.u, 0.0).powi(2);
        *m = 0.5 * sobolev_seminorm(&s.w, 0.0).powi(2);
        Ok(())
    })
}

/// `‖Λ^σ u‖₂` and `‖Λ^σ w‖₂`.
///
/// # Safety
/// `sim` must come from [`mps_simulation_create`]; outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn mps_simulation_norm(
    sim: *const MpsSimulation,
    sigma: f64,
    u_norm: *mut f64,
    w_norm: *mut f64,
) -> MpsStatus {
    guard(|| {
        let s = &sim_ref(sim)?.state;
        if !sigma.is_finite() {
            set_error(format!("sigma must be finite, got {sigma}"));
            return Err(MpsStatus::InvalidArgument);
        }
        let un = out_arg(u_norm, "u_norm")?;
        let wn = out_arg(w_norm, "w_norm")?;
        *un = sobolev_seminorm(&s.u, sigma);
        *wn = sobolev_seminorm(&s.w, sigma);
        Ok(())
    })
}

/// Write the current state as a checkpoint file.
///
/// # Safety
/// `sim` must come from [`mps_simulation_create`]; `path` must be a
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mps_simulation_checkpoint(sim: *const MpsSimulation, path: *const c_char) -> MpsStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let path = str_arg(path, "path")?;
        let file = lib(File::create(path).map_err(Error::from))?;
        lib(write_checkpoint(&mut BufWriter::new(file), &sim.state, &sim.spec, &sim.cfg))
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `sim` must be null or come from [`mps_simulation_create`], and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mps_simulation_destroy(sim: *mut MpsSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Run a named property suite; `failed` receives the number of failing
/// properties. Returns [`MpsStatus::PropertyFailed`] when it is nonzero.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `failed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mps_verify(suite: *const c_char, seed: u64, failed: *mut u32) -> MpsStatus {
    guard(|| {
        let suite: Suite = lib(str_arg(suite, "suite")?.parse())?;
        let out = out_arg(failed, "failed")?;
        let bad: Vec<String> = run_suite(suite, seed)
            .into_iter()
            .filter(|r| !r.passed)
            .map(|r| r.to_string())
            .collect();
        *out = bad.len() as u32;
        if bad.is_empty() {
            Ok(())
        } else {
            set_error(bad.join("; "));
            Err(MpsStatus::PropertyFailed)
        }
    })
}

/// Partial integral from `e` to `t` of a growth condition (`"log_sqrt"` or
/// `"quartic_log"`) for a registered `g` (`"g1"`, `"g2"`, `"g3"`, `"g_bad"`,
/// `"one"`).
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mps_g_partial_integral(
    g: *const c_char,
    condition: *const c_char,
    t: f64,
    out: *mut f64,
) -> MpsStatus {
    guard(|| {
        let g = lib(g_by_label(str_arg(g, "g")?))?;
        let cond: GCondition = lib(str_arg(condition, "condition")?.parse())?;
        let out = out_arg(out, "out")?;
        *out = lib(g_condition_partial_integral(&g, cond, t))?;
        Ok(())
    })
}
