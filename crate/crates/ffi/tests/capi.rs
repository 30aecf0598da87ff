use std::ffi::{CStr, CString};
use std::f64::consts::PI;
use std::ptr;

use kcone_ffi::*;

const DISK: &str = r#"{"schema":1,"space":{"kind":"glued","cone":{"kappa":0,"radius":1,
    "sigma":{"kind":"circle","length":6.283185307179586}},"phi":{"kind":"antipodal_circle"}}}"#;

fn last_error() -> String {
    unsafe { CStr::from_ptr(kc_last_error_message()) }.to_str().unwrap().to_owned()
}

fn space(json: &str) -> *mut KcSpace {
    let json = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { kc_space_from_json(json.as_ptr(), &mut out) }, KcStatus::Ok, "{}", last_error());
    assert!(!out.is_null());
    out
}

#[test]
fn scalar_kernels() {
    let mut v = 0.0;
    assert_eq!(unsafe { kc_sn(-1.0, 1.0, &mut v) }, KcStatus::Ok);
    assert_eq!(v, 1f64.sinh());
    assert_eq!(unsafe { kc_cosine_law_side(0.0, 3.0, 4.0, PI / 2.0, &mut v) }, KcStatus::Ok);
    assert!((v - 5.0).abs() < 1e-12);

    v = -7.0;
    assert_eq!(unsafe { kc_sn(1.0, 4.0, &mut v) }, KcStatus::InvalidArgument);
    assert_eq!(v, -7.0, "out pointer written on failure");
    assert!(last_error().contains("outside"), "{}", last_error());
    assert_eq!(unsafe { kc_sn(1.0, 1.0, ptr::null_mut()) }, KcStatus::NullPointer);
}

#[test]
fn glued_space_round_trip() {
    let s = space(DISK);
    let (from, to) = (CString::new("0.9,0deg").unwrap(), CString::new("0.9,180deg").unwrap());
    let (mut d, mut bound) = (0.0, 0.0);
    let st = unsafe { kc_space_distance(s, from.as_ptr(), to.as_ptr(), 0.05, &mut d, &mut bound) };
    assert_eq!(st, KcStatus::Ok, "{}", last_error());
    assert!((d - 0.2).abs() <= 0.15 && bound > 0.0);
    assert!(last_error().is_empty());

    let (mut v, mut err) = (0.0, 0.0);
    assert_eq!(unsafe { kc_space_ball_volume(s, 1.0, 0, 0, &mut v, &mut err) }, KcStatus::Ok);
    assert!((v - PI).abs() < 1e-9);
    assert_eq!(unsafe { kc_space_ball_volume(s, 0.5, 100_000, 3, &mut v, ptr::null_mut()) }, KcStatus::Ok);
    assert!((v - PI / 4.0).abs() < 0.02);
    assert_eq!(unsafe { kc_space_ball_volume(s, 2.0, 0, 0, &mut v, ptr::null_mut()) }, KcStatus::InvalidArgument);
    unsafe { kc_space_free(s) };
    unsafe { kc_space_free(ptr::null_mut()) };
}

#[test]
fn bad_documents() {
    let mut out = ptr::null_mut();
    let bad = CString::new(r#"{"schema":1,"space":{"kind":"circle","lenght":1}}"#).unwrap();
    assert_eq!(unsafe { kc_space_from_json(bad.as_ptr(), &mut out) }, KcStatus::Schema);
    assert!(out.is_null());
    assert!(last_error().contains("lenght"));
    assert_eq!(unsafe { kc_space_from_json(ptr::null(), &mut out) }, KcStatus::NullPointer);

    let s = space(r#"{"schema":1,"space":{"kind":"circle","length":3}}"#);
    let mut v = 0.0;
    assert_eq!(unsafe { kc_space_ball_volume(s, 1.0, 0, 0, &mut v, ptr::null_mut()) }, KcStatus::Unsupported);
    let (a, b) = (CString::new("0").unwrap(), CString::new("2").unwrap());
    assert_eq!(unsafe { kc_space_distance(s, a.as_ptr(), b.as_ptr(), 0.1, &mut v, ptr::null_mut()) }, KcStatus::Ok);
    assert_eq!(v, 1.0);
    unsafe { kc_space_free(s) };
}

#[test]
fn header_declares_every_function() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kcone.h")).unwrap();
    for name in [
        "kc_sn",
        "kc_cosine_law_side",
        "kc_space_from_json",
        "kc_space_free",
        "kc_space_distance",
        "kc_space_ball_volume",
        "kc_last_error_message",
        "typedef struct KcSpace KcSpace",
        "KC_STATUS_INTERNAL = 6",
    ] {
        assert!(header.contains(name), "{name} missing");
    }
}
