use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use passivity_ffi::*;
use serde_json::Value;

fn corpus(name: &str) -> CString {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/problems")
        .join(format!("{name}.json"));
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn parse(text: &CString) -> *mut PvProblem {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { pv_problem_parse(text.as_ptr(), &mut h) }, PvStatus::Ok);
    assert!(!h.is_null());
    h
}

/// Takes ownership of a returned string.
fn take(s: *mut std::ffi::c_char) -> Value {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pv_string_free(s) };
    serde_json::from_str(&text).unwrap()
}

fn last_error() -> String {
    let p = pv_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn check_statuses_follow_verdicts() {
    for (name, status, verdict) in [
        ("heat", PvStatus::Ok, "passive"),
        ("obstructed", PvStatus::NotPassive, "not-passive"),
        ("gradient_inconsistent", PvStatus::Inconsistent, "inconsistent"),
    ] {
        let h = parse(&corpus(name));
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { pv_check(h, &mut out) }, status, "{name}");
        assert_eq!(take(out)["verdict"], verdict);
        unsafe { pv_problem_free(h) };
    }
}

#[test]
fn reduce_through_handle() {
    let h = parse(&corpus("first_order_single"));
    let target = CString::new(r#"[{"c":"1","m":[[["u",1,[1,1]],1]]}]"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pv_reduce(h, target.as_ptr(), &mut out) }, PvStatus::Ok);
    assert_eq!(take(out)["text"], "1");

    let bad = CString::new(r#"[{"c":"x","m":[]}]"#).unwrap();
    assert_eq!(unsafe { pv_reduce(h, bad.as_ptr(), &mut out) }, PvStatus::InvalidInput);
    assert!(out.is_null());
    assert!(last_error().contains("target[0].c"));
    unsafe { pv_problem_free(h) };
}

#[test]
fn step_limit_status() {
    let text = corpus("heat").into_string().unwrap();
    let limited = text.replacen('{', r#"{"bounds": {"max_steps": 1},"#, 1);
    let h = parse(&CString::new(limited).unwrap());
    let target = CString::new(r#"[{"c":"1","m":[[["u",1,[6,0]],1]]}]"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pv_reduce(h, target.as_ptr(), &mut out) }, PvStatus::StepLimit);
    unsafe { pv_problem_free(h) };
}

#[test]
fn syzygies_quotient_and_audit() {
    let h = parse(&corpus("heat"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pv_syzygies(h, &mut out) }, PvStatus::Ok);
    assert_eq!(take(out), serde_json::json!([]));
    assert_eq!(unsafe { pv_quotient(h, 2, &mut out) }, PvStatus::Ok);
    assert_eq!(take(out)["census"]["parametric"].as_array().unwrap().len(), 5);
    assert_eq!(unsafe { pv_ranking_audit(h, 100, &mut out) }, PvStatus::Ok);
    assert_eq!(take(out)["passed"], true);
    unsafe { pv_problem_free(h) };

    let h = parse(&corpus("broken_ranking"));
    assert_eq!(unsafe { pv_ranking_audit(h, 100, &mut out) }, PvStatus::NotPassive);
    assert_eq!(take(out)["passed"], false);
    unsafe { pv_problem_free(h) };
}

#[test]
fn invalid_arguments() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { pv_problem_parse(ptr::null(), &mut h) }, PvStatus::NullPointer);
    assert!(h.is_null());

    let bad_utf8 = CString::new(vec![b'{', 0xff, b'}']).unwrap();
    assert_eq!(unsafe { pv_problem_parse(bad_utf8.as_ptr(), &mut h) }, PvStatus::InvalidUtf8);

    let malformed = CString::new("{\"n\": 2,").unwrap();
    assert_eq!(unsafe { pv_problem_parse(malformed.as_ptr(), &mut h) }, PvStatus::InvalidInput);
    assert!(last_error().contains("line 1"));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pv_check(ptr::null(), &mut out) }, PvStatus::NullPointer);
    let real = parse(&corpus("heat"));
    assert_eq!(unsafe { pv_check(real, ptr::null_mut()) }, PvStatus::NullPointer);
    assert_eq!(unsafe { pv_check(real, &mut out) }, PvStatus::Ok);
    assert!(pv_last_error().is_null());
    unsafe {
        pv_string_free(out);
        pv_string_free(ptr::null_mut());
        pv_problem_free(real);
        pv_problem_free(ptr::null_mut());
    }
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(pv_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/passivity.h")).unwrap();
    for symbol in [
        "pv_version",
        "pv_last_error",
        "pv_problem_parse",
        "pv_problem_free",
        "pv_string_free",
        "pv_check",
        "pv_reduce",
        "pv_syzygies",
        "pv_quotient",
        "pv_ranking_audit",
        "PV_STATUS_STEP_LIMIT = 4",
        "typedef struct PvProblem PvProblem",
    ] {
        assert!(header.contains(symbol), "{symbol}");
    }
}
