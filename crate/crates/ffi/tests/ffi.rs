use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use systole_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { systole_string_free(p) };
    s
}

#[test]
fn expected_systole_round_trip() {
    let d = CString::new("4.6").unwrap();
    let mut report = ptr::null_mut();
    let status = unsafe { systole_expected_systole(d.as_ptr(), 256, &mut report) };
    assert_eq!(status, SystoleStatus::Ok);
    unsafe {
        assert!((systole_report_s_c(report) - 2.56034118731933).abs() < 1e-12);
        let se = systole_report_s_e(report);
        assert!(se > 2.9e-16 && se <= 3.0e-16);
        assert_eq!(systole_report_n_lengths(report), 31);
        let (mut n, mut d) = (0i64, 0i64);
        assert_eq!(systole_report_cum_rate(report, &mut n, &mut d), SystoleStatus::Ok);
        assert_eq!((n, d), (112, 3));
        let json: serde_json::Value = serde_json::from_str(&take_string(systole_report_json(report))).unwrap();
        assert_eq!(json["anchors"]["tau_l32_ceiling"], 11);
        systole_report_free(report);
    }
}

#[test]
fn spectrum_entries() {
    let d = CString::new("3.2").unwrap();
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { systole_spectrum(d.as_ptr(), 128, &mut spec) }, SystoleStatus::Ok);
    let len = unsafe { systole_spectrum_len(spec) };
    assert!(len >= 2);
    let (mut l, mut n, mut den, mut k) = (0.0, 0i64, 0i64, 0usize);
    let mut prev = 0.0;
    for i in 0..len {
        assert_eq!(unsafe { systole_spectrum_entry(spec, i, &mut l, &mut n, &mut den, &mut k) }, SystoleStatus::Ok);
        assert!(l > prev && n > 0 && den > 0 && k > 0);
        prev = l;
    }
    let status = unsafe { systole_spectrum_entry(spec, len, &mut l, &mut n, &mut den, &mut k) };
    assert_eq!(status, SystoleStatus::OutOfRange);
    unsafe { systole_spectrum_free(spec) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut report = ptr::null_mut();
    let bad = CString::new("4.6x").unwrap();
    assert_eq!(unsafe { systole_expected_systole(bad.as_ptr(), 256, &mut report) }, SystoleStatus::InvalidConfig);
    assert!(report.is_null());
    assert!(!take_string(systole_last_error()).is_empty());

    let small = CString::new("1.5").unwrap();
    let status = unsafe { systole_expected_systole(small.as_ptr(), 256, &mut report) };
    assert_eq!(status, SystoleStatus::InsufficientCutoff);

    let d = CString::new("4.6").unwrap();
    assert_eq!(unsafe { systole_expected_systole(d.as_ptr(), 16, &mut report) }, SystoleStatus::InvalidConfig);
    assert_eq!(unsafe { systole_expected_systole(ptr::null(), 256, &mut report) }, SystoleStatus::NullPointer);
    assert_eq!(unsafe { systole_expected_systole(d.as_ptr(), 256, ptr::null_mut()) }, SystoleStatus::NullPointer);

    unsafe {
        assert!(systole_report_s_c(ptr::null()).is_nan());
        assert_eq!(systole_spectrum_len(ptr::null()), 0);
        systole_report_free(ptr::null_mut());
        systole_spectrum_free(ptr::null_mut());
        systole_string_free(ptr::null_mut());
    }
}

#[test]
fn word_traces() {
    let (mut re, mut im) = (0i64, 0i64);
    let w = CString::new("SSR1").unwrap();
    assert_eq!(unsafe { systole_word_trace(w.as_ptr(), &mut re, &mut im) }, SystoleStatus::Ok);
    assert_eq!((re.abs(), im), (4, 0));
    let bad = CString::new("SQ").unwrap();
    assert_eq!(unsafe { systole_word_trace(bad.as_ptr(), &mut re, &mut im) }, SystoleStatus::InvalidConfig);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(systole_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/systole.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["systole_expected_systole", "systole_report_free", "systole_last_error", "SYSTOLE_STATUS_OK"] {
        assert!(text.contains(name), "{name}");
    }
    match Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).status() {
        Ok(s) => assert!(s.success()),
        Err(e) => panic!("no C compiler available: {e}"),
    }
}
