//! C ABI over the `hcn-ris` optimizer.
//!
//! Scenarios and reports are opaque handles owned by the caller and released
//! with their `*_free` function. Every fallible call returns an [`HcnStatus`];
//! on failure [`hcn_last_error`] describes the cause for the calling thread.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hcn_ris::optim::{run_algorithm, Algorithm, OptimizerConfig, Outcome};
use hcn_ris::scenario::{build_scenario, presets, Scenario, ScenarioConfig};
use hcn_ris::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    TraversalRefused = 4,
    InvalidArgument = 5,
    InternalError = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcnAlgorithm {
    Pa = 0,
    Cga = 1,
    Ro = 2,
    Ra = 3,
    Ccga = 4,
    Os = 5,
}

impl From<HcnAlgorithm> for Algorithm {
    fn from(a: HcnAlgorithm) -> Self {
        match a {
            HcnAlgorithm::Pa => Algorithm::Pa,
            HcnAlgorithm::Cga => Algorithm::Cga,
            HcnAlgorithm::Ro => Algorithm::Ro,
            HcnAlgorithm::Ra => Algorithm::Ra,
            HcnAlgorithm::Ccga => Algorithm::Ccga,
            HcnAlgorithm::Os => Algorithm::Os,
        }
    }
}

/// A frozen network instance.
pub struct HcnScenario {
    inner: Scenario,
}

/// Outcome of one optimizer run.
pub struct HcnReport {
    inner: Outcome,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(err: &Error) -> HcnStatus {
    match err {
        Error::Config(_) | Error::Json(_) | Error::Uncovered { .. } => HcnStatus::ConfigError,
        Error::TraversalTooLarge { .. } => HcnStatus::TraversalRefused,
        Error::InvalidArgument(_) | Error::LengthMismatch { .. } => HcnStatus::InvalidArgument,
        _ => HcnStatus::InternalError,
    }
}

fn fail(status: HcnStatus, message: &str) -> HcnStatus {
    set_error(message);
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guarded(f: impl FnOnce() -> Result<(), HcnStatus>) -> HcnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HcnStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(HcnStatus::Panic, &msg)
        }
    }
}

fn lift(err: Error) -> HcnStatus {
    fail(status_of(&err), &err.to_string())
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, HcnStatus> {
    if text.is_null() {
        return Err(fail(HcnStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(text).to_str().map_err(|_| fail(HcnStatus::InvalidUtf8, "string argument is not UTF-8"))
}

fn publish<T>(out: *mut *mut T, value: T) -> Result<(), HcnStatus> {
    if out.is_null() {
        return Err(fail(HcnStatus::NullPointer, "null output pointer"));
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hcn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a scenario from a JSON scenario config and a seed.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcn_scenario_from_json(
    config_json: *const c_char,
    seed: u64,
    out: *mut *mut HcnScenario,
) -> HcnStatus {
    guarded(|| {
        let text = read_str(config_json)?;
        let config = ScenarioConfig::from_json(text).map_err(lift)?;
        config.validate().map_err(lift)?;
        let inner = build_scenario(&config, seed).map_err(lift)?;
        publish(out, HcnScenario { inner })
    })
}

/// Builds the reference ten-cell, 55-user layout.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcn_scenario_default(seed: u64, out: *mut *mut HcnScenario) -> HcnStatus {
    guarded(|| {
        let inner = build_scenario(&presets::default_config(), seed).map_err(lift)?;
        publish(out, HcnScenario { inner })
    })
}

/// Reloads a frozen scenario snapshot (as written by `hcn-ris single`).
///
/// # Safety
/// `snapshot_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcn_scenario_from_snapshot(
    snapshot_json: *const c_char,
    out: *mut *mut HcnScenario,
) -> HcnStatus {
    guarded(|| {
        let text = read_str(snapshot_json)?;
        let inner = Scenario::from_json(text).map_err(lift)?;
        publish(out, HcnScenario { inner })
    })
}

/// # Safety
/// `scenario` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcn_scenario_num_users(scenario: *const HcnScenario) -> usize {
    scenario.as_ref().map_or(0, |s| s.inner.num_users())
}

/// # Safety
/// `scenario` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcn_scenario_num_base_stations(scenario: *const HcnScenario) -> usize {
    scenario.as_ref().map_or(0, |s| s.inner.num_base_stations())
}

/// # Safety
/// `scenario` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn hcn_scenario_free(scenario: *mut HcnScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Runs one algorithm with default optimizer settings. `traversal_limit`
/// caps the association count of `HCN_ALGORITHM_OS` (0 keeps the default).
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcn_run(
    scenario: *const HcnScenario,
    algorithm: HcnAlgorithm,
    seed: u64,
    traversal_limit: u64,
    out: *mut *mut HcnReport,
) -> HcnStatus {
    guarded(|| {
        let s = scenario.as_ref().ok_or_else(|| fail(HcnStatus::NullPointer, "null scenario"))?;
        let mut config = OptimizerConfig::default();
        if traversal_limit > 0 {
            config.traversal_limit = traversal_limit as u128;
        }
        let inner = run_algorithm(&s.inner, algorithm.into(), seed, &config).map_err(lift)?;
        publish(out, HcnReport { inner })
    })
}

/// System sum rate in bit/s (NaN for NULL).
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcn_report_sum_rate(report: *const HcnReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.report.sum_rate)
}

/// Jain index over cell utilities (NaN for NULL).
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcn_report_fairness(report: *const HcnReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.report.fairness)
}

/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcn_report_num_users(report: *const HcnReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.report.per_user_rate.len())
}

/// Copies per-user rates (bit/s) into `rates`, which holds `len` values;
/// `len` must equal the user count.
///
/// # Safety
/// `report` must be a live handle and `rates` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hcn_report_user_rates(report: *const HcnReport, rates: *mut f64, len: usize) -> HcnStatus {
    guarded(|| {
        let r = report.as_ref().ok_or_else(|| fail(HcnStatus::NullPointer, "null report"))?;
        if rates.is_null() {
            return Err(fail(HcnStatus::NullPointer, "null buffer"));
        }
        let src = &r.inner.report.per_user_rate;
        if len != src.len() {
            return Err(fail(HcnStatus::InvalidArgument, &format!("buffer holds {len} values, need {}", src.len())));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), rates, len);
        Ok(())
    })
}

/// Copies each user's serving cell into `cells` (-1 = unserved).
///
/// # Safety
/// `report` must be a live handle and `cells` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn hcn_report_serving_cells(report: *const HcnReport, cells: *mut i64, len: usize) -> HcnStatus {
    guarded(|| {
        let r = report.as_ref().ok_or_else(|| fail(HcnStatus::NullPointer, "null report"))?;
        if cells.is_null() {
            return Err(fail(HcnStatus::NullPointer, "null buffer"));
        }
        let slots = &r.inner.assignment.slots;
        if len != slots.len() {
            return Err(fail(HcnStatus::InvalidArgument, &format!("buffer holds {len} values, need {}", slots.len())));
        }
        for (i, slot) in slots.iter().enumerate() {
            *cells.add(i) = slot.map_or(-1, |s| s.bs as i64);
        }
        Ok(())
    })
}

/// Full outcome as JSON; release the string with [`hcn_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcn_report_to_json(report: *const HcnReport, out: *mut *mut c_char) -> HcnStatus {
    guarded(|| {
        let r = report.as_ref().ok_or_else(|| fail(HcnStatus::NullPointer, "null report"))?;
        if out.is_null() {
            return Err(fail(HcnStatus::NullPointer, "null output pointer"));
        }
        let text = serde_json::to_string(&r.inner).map_err(|e| lift(e.into()))?;
        *out = CString::new(text).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `text` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hcn_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// # Safety
/// `report` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn hcn_report_free(report: *mut HcnReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Directional antenna gain (dB) at `theta_deg` off boresight.
#[no_mangle]
pub extern "C" fn hcn_antenna_gain_db(theta_deg: f64, half_power_beamwidth_deg: f64) -> f64 {
    hcn_ris::channel::mmwave_antenna_gain_db(theta_deg, half_power_beamwidth_deg)
}

/// Blockage probability `1 - exp(-beta l)` of a link of `distance_m`.
#[no_mangle]
pub extern "C" fn hcn_outage_probability(distance_m: f64, beta_per_m: f64) -> f64 {
    hcn_ris::channel::outage_probability(distance_m, beta_per_m)
}

/// Jain's fairness index of `len` values.
///
/// # Safety
/// `values` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcn_jain_fairness(values: *const f64, len: usize, out: *mut f64) -> HcnStatus {
    guarded(|| {
        if (values.is_null() && len > 0) || out.is_null() {
            return Err(fail(HcnStatus::NullPointer, "null pointer"));
        }
        let xs = if len == 0 { &[][..] } else { std::slice::from_raw_parts(values, len) };
        *out = hcn_ris::rates::jain_fairness(xs);
        Ok(())
    })
}
