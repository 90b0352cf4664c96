//! C ABI for the scenario simulator.
//!
//! Conventions:
//! - scenarios are opaque handles created by `erasim_scenario_from_text` /
//!   `erasim_scenario_builtin` and released with `erasim_scenario_free`;
//! - every fallible call returns an `ErasimStatus`; on failure a
//!   human-readable message is available from `erasim_last_error` until the
//!   next call on the same thread;
//! - strings returned through out-parameters are NUL-terminated, owned by
//!   the caller, and must be released with `erasim_string_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::ptr;

use libc::{c_char, c_double, c_int};

use erasim::scenario::{
    builtin_resolver, builtin_scenario, parse_scenario, run_output_json, run_scenario,
    ScenarioDoc, BUILTIN_NAMES, DEFAULT_TOLERANCE,
};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErasimStatus {
    /// Success.
    ErasimOk = 0,
    /// A required pointer argument was NULL.
    ErasimNullArgument = 1,
    /// A string argument was not valid UTF-8.
    ErasimInvalidUtf8 = 2,
    /// The scenario text (or builtin name) did not parse or validate.
    ErasimParseError = 3,
    /// The scenario failed while running or auditing.
    ErasimRunError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Opaque scenario handle.
pub struct ErasimScenario {
    doc: ScenarioDoc,
}

/// Message for the most recent failure on this thread, or NULL if the last
/// call succeeded. The pointer is valid until the next `erasim_` call on the
/// same thread; do not free it.
#[no_mangle]
pub extern "C" fn erasim_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Default audit tolerance used when a negative tolerance is passed.
#[no_mangle]
pub extern "C" fn erasim_default_tolerance() -> c_double {
    DEFAULT_TOLERANCE
}

/// Comma-separated names of the canned scenarios. Free with
/// `erasim_string_free`.
#[no_mangle]
pub extern "C" fn erasim_builtin_names() -> *mut c_char {
    CString::new(BUILTIN_NAMES.join(","))
        .expect("builtin names contain no NUL")
        .into_raw()
}

unsafe fn read_utf8<'a>(text: *const c_char) -> Result<&'a str, ErasimStatus> {
    if text.is_null() {
        set_error("NULL string argument".into());
        return Err(ErasimStatus::ErasimNullArgument);
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8".into());
        ErasimStatus::ErasimInvalidUtf8
    })
}

fn emit_scenario(doc: ScenarioDoc, out: *mut *mut ErasimScenario) -> ErasimStatus {
    unsafe {
        *out = Box::into_raw(Box::new(ErasimScenario { doc }));
    }
    ErasimStatus::ErasimOk
}

/// Parses scenario text into a handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn erasim_scenario_from_text(
    text: *const c_char,
    out: *mut *mut ErasimScenario,
) -> ErasimStatus {
    clear_error();
    if out.is_null() {
        set_error("NULL out-parameter".into());
        return ErasimStatus::ErasimNullArgument;
    }
    let text = match read_utf8(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match parse_scenario(text) {
        Ok(doc) => emit_scenario(doc, out),
        Err(e) => {
            set_error(e.to_string());
            ErasimStatus::ErasimParseError
        }
    }
}

/// Loads a canned scenario by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn erasim_scenario_builtin(
    name: *const c_char,
    out: *mut *mut ErasimScenario,
) -> ErasimStatus {
    clear_error();
    if out.is_null() {
        set_error("NULL out-parameter".into());
        return ErasimStatus::ErasimNullArgument;
    }
    let name = match read_utf8(name) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match builtin_scenario(name) {
        Ok(doc) => emit_scenario(doc, out),
        Err(e) => {
            set_error(e.to_string());
            ErasimStatus::ErasimParseError
        }
    }
}

/// Scenario name as a fresh string; free with `erasim_string_free`.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn erasim_scenario_name(
    scenario: *const ErasimScenario,
    out: *mut *mut c_char,
) -> ErasimStatus {
    clear_error();
    if scenario.is_null() || out.is_null() {
        set_error("NULL argument".into());
        return ErasimStatus::ErasimNullArgument;
    }
    let name = CString::new((*scenario).doc.name.clone())
        .expect("scenario names contain no NUL");
    *out = name.into_raw();
    ErasimStatus::ErasimOk
}

/// Canonical scenario text (the parse/print fixed point); free with
/// `erasim_string_free`.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn erasim_scenario_text(
    scenario: *const ErasimScenario,
    out: *mut *mut c_char,
) -> ErasimStatus {
    clear_error();
    if scenario.is_null() || out.is_null() {
        set_error("NULL argument".into());
        return ErasimStatus::ErasimNullArgument;
    }
    let text = CString::new((*scenario).doc.to_string())
        .expect("scenario text contains no NUL");
    *out = text.into_raw();
    ErasimStatus::ErasimOk
}

/// Runs the scenario (audits included) and returns the result as one line of
/// JSON. Pass a negative `tolerance` to use the default. Cross-scenario
/// audits resolve against the canned scenarios. If `audits_pass` is non-NULL
/// it receives 1 when every audit passed, else 0.
///
/// # Safety
/// `scenario` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn erasim_run_json(
    scenario: *const ErasimScenario,
    tolerance: c_double,
    out_json: *mut *mut c_char,
    audits_pass: *mut c_int,
) -> ErasimStatus {
    clear_error();
    if scenario.is_null() || out_json.is_null() {
        set_error("NULL argument".into());
        return ErasimStatus::ErasimNullArgument;
    }
    let tol = if tolerance < 0.0 { DEFAULT_TOLERANCE } else { tolerance };
    match run_scenario(&(*scenario).doc, tol, &builtin_resolver) {
        Ok(output) => {
            let json = CString::new(run_output_json(&output))
                .expect("JSON output contains no NUL");
            *out_json = json.into_raw();
            if !audits_pass.is_null() {
                *audits_pass = output.all_audits_pass() as c_int;
            }
            ErasimStatus::ErasimOk
        }
        Err(e) => {
            set_error(e.to_string());
            ErasimStatus::ErasimRunError
        }
    }
}

/// Releases a scenario handle. NULL is a no-op.
///
/// # Safety
/// `scenario` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn erasim_scenario_free(scenario: *mut ErasimScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `text` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn erasim_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_owned();
        erasim_string_free(ptr);
        s
    }

    #[test]
    fn builtin_round_trip_through_the_abi() {
        unsafe {
            let name = CString::new("penrose-reverse").unwrap();
            let mut handle: *mut ErasimScenario = ptr::null_mut();
            assert_eq!(
                erasim_scenario_builtin(name.as_ptr(), &mut handle),
                ErasimStatus::ErasimOk
            );
            let mut out_name: *mut c_char = ptr::null_mut();
            assert_eq!(
                erasim_scenario_name(handle, &mut out_name),
                ErasimStatus::ErasimOk
            );
            assert_eq!(take_string(out_name), "penrose-reverse");

            let mut json: *mut c_char = ptr::null_mut();
            let mut pass: c_int = -1;
            assert_eq!(
                erasim_run_json(handle, -1.0, &mut json, &mut pass),
                ErasimStatus::ErasimOk
            );
            let json = take_string(json);
            assert!(json.contains("\"scenario\":\"penrose-reverse\""));
            assert!(json.contains("\"kind\":\"retro\""));
            assert!(json.contains("\"value\":0.5"));
            assert_eq!(pass, 1);
            erasim_scenario_free(handle);
        }
    }

    #[test]
    fn text_parses_and_canonical_text_reparses() {
        unsafe {
            let text = CString::new(
                "modes a b\nstate 1/sqrt2 |a=1,b=0> + i/sqrt2 |a=0,b=1>\nstep bs a b\nstep measure a b as D\n",
            )
            .unwrap();
            let mut handle: *mut ErasimScenario = ptr::null_mut();
            assert_eq!(
                erasim_scenario_from_text(text.as_ptr(), &mut handle),
                ErasimStatus::ErasimOk
            );
            let mut canonical: *mut c_char = ptr::null_mut();
            assert_eq!(
                erasim_scenario_text(handle, &mut canonical),
                ErasimStatus::ErasimOk
            );
            let canonical = take_string(canonical);
            let round = CString::new(canonical.clone()).unwrap();
            let mut second: *mut ErasimScenario = ptr::null_mut();
            assert_eq!(
                erasim_scenario_from_text(round.as_ptr(), &mut second),
                ErasimStatus::ErasimOk
            );
            assert_eq!((*handle).doc, (*second).doc);
            erasim_scenario_free(handle);
            erasim_scenario_free(second);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        unsafe {
            let mut handle: *mut ErasimScenario = ptr::null_mut();
            let bad = CString::new("modes g0 g1\nstate 1 |g0=1>\n").unwrap();
            assert_eq!(
                erasim_scenario_from_text(bad.as_ptr(), &mut handle),
                ErasimStatus::ErasimParseError
            );
            let message = CStr::from_ptr(erasim_last_error()).to_str().unwrap();
            assert!(message.contains("line 2"), "message: {message}");

            let missing = CString::new("no-such-scenario").unwrap();
            assert_eq!(
                erasim_scenario_builtin(missing.as_ptr(), &mut handle),
                ErasimStatus::ErasimParseError
            );

            assert_eq!(
                erasim_scenario_from_text(ptr::null(), &mut handle),
                ErasimStatus::ErasimNullArgument
            );
            assert_eq!(
                erasim_run_json(ptr::null(), -1.0, &mut ptr::null_mut(), ptr::null_mut()),
                ErasimStatus::ErasimNullArgument
            );
        }
    }

    #[test]
    fn builtin_names_and_tolerance_are_exposed() {
        unsafe {
            let names = take_string(erasim_builtin_names());
            assert!(names.contains("eraser-contingent"));
            assert_eq!(erasim_default_tolerance(), 1e-12);
        }
    }
}
