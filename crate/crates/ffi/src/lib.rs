//! C interface to the passivity library.
//!
//! A problem is parsed once into an opaque handle. Every query writes a
//! heap-allocated JSON string to `*out`, which the caller releases with
//! `pv_string_free`. On failure `*out` is left null and `pv_last_error`
//! describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use passivity::json;
use passivity::passivity::Verdict;
use passivity::problem::ProblemFile;
use passivity::ranking::AuditConfig;
use passivity::syzygy::tau_generators;
use passivity::Error;
use serde_json::{json, Value};

/// Status codes. The first five match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PvStatus {
    Ok = 0,
    InvalidInput = 1,
    NotPassive = 2,
    Inconsistent = 3,
    StepLimit = 4,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

/// Opaque problem handle.
pub struct PvProblem {
    problem: ProblemFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(PvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::StepLimit { .. } => PvStatus::StepLimit,
            _ => PvStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn verdict_status(v: Verdict) -> PvStatus {
    match v {
        Verdict::Passive => PvStatus::Ok,
        Verdict::NotPassive => PvStatus::NotPassive,
        Verdict::Inconsistent => PvStatus::Inconsistent,
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(PvStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(PvStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn problem<'a>(h: *const PvProblem) -> Result<&'a ProblemFile, Failure> {
    h.as_ref()
        .map(|h| &h.problem)
        .ok_or_else(|| Failure(PvStatus::NullPointer, "problem handle is null".into()))
}

/// Runs `body`, stores its JSON in `*out` and returns its status.
fn respond(out: *mut *mut c_char, body: impl FnOnce() -> Result<(Value, PvStatus), Failure>) -> PvStatus {
    clear_error();
    if out.is_null() {
        set_error("output pointer is null");
        return PvStatus::NullPointer;
    }
    unsafe { *out = ptr::null_mut() };
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok((value, status))) => {
            let text = CString::new(value.to_string()).expect("JSON has no interior NUL");
            unsafe { *out = text.into_raw() };
            status
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PvStatus::Panic
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn pv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a problem document into a new handle stored in `*out`.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pv_problem_parse(json: *const c_char, out: *mut *mut PvProblem) -> PvStatus {
    clear_error();
    if out.is_null() {
        set_error("output pointer is null");
        return PvStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<ProblemFile, Failure> {
        let text = read_str(json, "problem JSON")?;
        Ok(ProblemFile::parse(text)?)
    }));
    match result {
        Ok(Ok(problem)) => {
            *out = Box::into_raw(Box::new(PvProblem { problem }));
            PvStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PvStatus::Panic
        }
    }
}

/// # Safety
/// `handle` must be null or come from `pv_problem_parse`, and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pv_problem_free(handle: *mut PvProblem) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn pv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Passivity report. Returns Ok, NotPassive or Inconsistent per the verdict.
///
/// # Safety
/// `handle` must be a live handle or null; `out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn pv_check(handle: *const PvProblem, out: *mut *mut c_char) -> PvStatus {
    respond(out, || {
        let report = problem(handle)?.analyze()?;
        Ok((json::report(&report), verdict_status(report.verdict)))
    })
}

/// Reduces the polynomial given as JSON modulo the system.
///
/// # Safety
/// As for `pv_check`; `target` must be null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn pv_reduce(
    handle: *const PvProblem,
    target: *const c_char,
    out: *mut *mut c_char,
) -> PvStatus {
    respond(out, || {
        let p = problem(handle)?;
        let text = read_str(target, "target")?;
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Failure(PvStatus::InvalidInput, format!("target: {e}")))?;
        let f = json::parse_poly(&value, "target")?;
        p.ambient.check_poly(&f)?;
        let r = p.system()?.reduce(&f, p.bounds.max_steps)?;
        let value = json!({
            "remainder": json::poly(&r.remainder),
            "text": r.remainder.to_string(),
            "trace": json::trace(&r.trace),
        });
        Ok((value, PvStatus::Ok))
    })
}

/// Cross-derivative syzygy generators of the leads.
///
/// # Safety
/// As for `pv_check`.
#[no_mangle]
pub unsafe extern "C" fn pv_syzygies(handle: *const PvProblem, out: *mut *mut c_char) -> PvStatus {
    respond(out, || {
        let p = problem(handle)?;
        let leads: Vec<_> = p.equations.iter().map(|e| e.lead().clone()).collect();
        Ok((json::taus(&tau_generators(&leads)?), PvStatus::Ok))
    })
}

/// Quotient census up to `order`; a negative order keeps the problem's bound.
///
/// # Safety
/// As for `pv_check`.
#[no_mangle]
pub unsafe extern "C" fn pv_quotient(handle: *const PvProblem, order: i32, out: *mut *mut c_char) -> PvStatus {
    respond(out, || {
        let mut p = problem(handle)?.clone();
        if order >= 0 {
            p.bounds.order_bound = order as u32;
        }
        let report = p.analyze()?;
        let value = json!({
            "verdict": report.verdict.name(),
            "census": report.census.as_ref().map_or(Value::Null, json::census),
        });
        Ok((value, verdict_status(report.verdict)))
    })
}

/// Ranking axiom audit with `samples` random checks. Returns NotPassive when
/// counterexamples were found.
///
/// # Safety
/// As for `pv_check`.
#[no_mangle]
pub unsafe extern "C" fn pv_ranking_audit(
    handle: *const PvProblem,
    samples: usize,
    out: *mut *mut c_char,
) -> PvStatus {
    respond(out, || {
        let p = problem(handle)?;
        let cfg = AuditConfig {
            samples,
            ..AuditConfig::default()
        };
        let audit = p.ranking.audit(&p.ambient, &cfg)?;
        let status = if audit.passed() { PvStatus::Ok } else { PvStatus::NotPassive };
        Ok((json::audit(&p.ranking, &audit, cfg.exhaustive_order), status))
    })
}
