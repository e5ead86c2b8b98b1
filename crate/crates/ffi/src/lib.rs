//! C interface to the systole library.
//!
//! Every fallible call returns a [`SystoleStatus`]; on failure the message is
//! available from [`systole_last_error`]. Handles are opaque and must be released
//! with their matching `_free` function. Strings returned by the library are
//! released with [`systole_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use systole::enumerate::{enumerate_words, EnumerationConfig};
use systole::error::SystoleError;
use systole::io;
use systole::real::{MAX_PRECISION, MIN_PRECISION};
use systole::spectrum::{assemble_spectrum, SpectrumEntry};
use systole::tail::{expected_systole, SystoleReport as Report};
use systole::word::Word;

/// Result codes; the nonzero library codes match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystoleStatus {
    Ok = 0,
    InvalidConfig = 2,
    InsufficientCutoff = 3,
    CapExceeded = 4,
    UncertifiedComparison = 5,
    AnchorFailure = 6,
    Cache = 7,
    Io = 8,
    NullPointer = 9,
    OutOfRange = 10,
    Panic = 11,
}

impl From<&SystoleError> for SystoleStatus {
    fn from(e: &SystoleError) -> Self {
        match e {
            SystoleError::InvalidConfig(_) => SystoleStatus::InvalidConfig,
            SystoleError::InsufficientCutoff { .. } => SystoleStatus::InsufficientCutoff,
            SystoleError::CapExceeded { .. } => SystoleStatus::CapExceeded,
            SystoleError::UncertifiedComparison { .. } => SystoleStatus::UncertifiedComparison,
            SystoleError::AnchorFailure(_) => SystoleStatus::AnchorFailure,
            SystoleError::Cache(_) => SystoleStatus::Cache,
            SystoleError::Io(_) => SystoleStatus::Io,
        }
    }
}

/// Result of an expected-systole computation.
pub struct SystoleReport(Report);

/// Ordered length spectrum below a cutoff.
pub struct SystoleSpectrum(Vec<SpectrumEntry>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SystoleStatus, msg: impl Into<String>) -> SystoleStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> SystoleStatus) -> SystoleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SystoleStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, SystoleStatus> {
    if p.is_null() {
        return Err(fail(SystoleStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(SystoleStatus::InvalidConfig, "argument is not UTF-8"))
}

fn check_precision(p: u32) -> Result<(), SystoleStatus> {
    if (MIN_PRECISION..=MAX_PRECISION).contains(&p) {
        Ok(())
    } else {
        Err(fail(SystoleStatus::InvalidConfig, format!("precision {p} outside [{MIN_PRECISION}, {MAX_PRECISION}]")))
    }
}

fn lib_err(e: SystoleError) -> SystoleStatus {
    let s = SystoleStatus::from(&e);
    fail(s, e.to_string())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or NULL. Free with
/// `systole_string_free`.
#[no_mangle]
pub extern "C" fn systole_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map(|c| c.clone().into_raw()).unwrap_or(ptr::null_mut()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn systole_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn systole_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Computes the head sum and tail bound for the decimal cutoff `d`.
///
/// # Safety
/// `d` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn systole_expected_systole(
    d: *const c_char,
    precision_bits: u32,
    out: *mut *mut SystoleReport,
) -> SystoleStatus {
    guard(|| {
        if out.is_null() {
            return fail(SystoleStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let d = match read_str(d) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if let Err(s) = check_precision(precision_bits) {
            return s;
        }
        let cfg = match EnumerationConfig::parse(d, precision_bits) {
            Ok(c) => c,
            Err(e) => return lib_err(e),
        };
        match expected_systole(&cfg.cutoff, None) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(SystoleReport(r)));
                SystoleStatus::Ok
            }
            Err(e) => lib_err(e),
        }
    })
}

/// # Safety
/// `report` must be NULL or a handle from `systole_expected_systole`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn systole_report_free(report: *mut SystoleReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

unsafe fn report_ref<'a>(r: *const SystoleReport) -> Option<&'a Report> {
    r.as_ref().map(|r| &r.0)
}

/// Head sum `S_c` rounded to a double; NaN for a NULL handle.
///
/// # Safety
/// `report` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn systole_report_s_c(report: *const SystoleReport) -> f64 {
    report_ref(report).map_or(f64::NAN, |r| r.s_c.to_f64())
}

/// Certified tail bound `S_e` rounded up to a double; NaN for a NULL handle.
///
/// # Safety
/// `report` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn systole_report_s_e(report: *const SystoleReport) -> f64 {
    report_ref(report).map_or(f64::NAN, |r| {
        let hi = r.s_e.upper();
        let x = systole::real::PreciseReal::from_ratio(&hi, 64).to_f64();
        if x < f64::MAX {
            x.next_up()
        } else {
            x
        }
    })
}

/// Number of distinct lengths in the head; 0 for a NULL handle.
///
/// # Safety
/// `report` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn systole_report_n_lengths(report: *const SystoleReport) -> usize {
    report_ref(report).map_or(0, |r| r.spectrum.len())
}

/// Cumulative rate of the head as a fraction.
///
/// # Safety
/// `report` must be a live report handle; `num` and `den` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn systole_report_cum_rate(
    report: *const SystoleReport,
    num: *mut i64,
    den: *mut i64,
) -> SystoleStatus {
    guard(|| {
        let Some(r) = report_ref(report) else {
            return fail(SystoleStatus::NullPointer, "null report");
        };
        if num.is_null() || den.is_null() {
            return fail(SystoleStatus::NullPointer, "null output pointer");
        }
        match (i64::try_from(r.cum_rate.numer()), i64::try_from(r.cum_rate.denom())) {
            (Ok(n), Ok(d)) => {
                *num = n;
                *den = d;
                SystoleStatus::Ok
            }
            _ => fail(SystoleStatus::OutOfRange, "rate does not fit in 64 bits"),
        }
    })
}

/// Full report as JSON, or NULL for a NULL handle. Free with `systole_string_free`.
///
/// # Safety
/// `report` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn systole_report_json(report: *const SystoleReport) -> *mut c_char {
    match report_ref(report) {
        Some(r) => {
            let config = io::config_json("ffi", serde_json::json!({ "D": r.cutoff, "precision_bits": r.precision }));
            into_c_string(io::pretty(&io::report_json(r, config)))
        }
        None => ptr::null_mut(),
    }
}

/// Enumerates and groups the lengths below the decimal cutoff `d`.
///
/// # Safety
/// `d` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn systole_spectrum(
    d: *const c_char,
    precision_bits: u32,
    out: *mut *mut SystoleSpectrum,
) -> SystoleStatus {
    guard(|| {
        if out.is_null() {
            return fail(SystoleStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let d = match read_str(d) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if let Err(s) = check_precision(precision_bits) {
            return s;
        }
        let result = EnumerationConfig::parse(d, precision_bits)
            .and_then(|cfg| enumerate_words(&cfg))
            .and_then(|e| assemble_spectrum(&e.classes, precision_bits));
        match result {
            Ok(s) => {
                *out = Box::into_raw(Box::new(SystoleSpectrum(s)));
                SystoleStatus::Ok
            }
            Err(e) => lib_err(e),
        }
    })
}

/// # Safety
/// `spectrum` must be NULL or a handle from `systole_spectrum`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn systole_spectrum_free(spectrum: *mut SystoleSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of distinct lengths; 0 for a NULL handle.
///
/// # Safety
/// `spectrum` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn systole_spectrum_len(spectrum: *const SystoleSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.len())
}

/// Length, rate fraction and class count of entry `i` (0-based).
///
/// # Safety
/// `spectrum` must be a live spectrum handle; the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn systole_spectrum_entry(
    spectrum: *const SystoleSpectrum,
    i: usize,
    length: *mut f64,
    rate_num: *mut i64,
    rate_den: *mut i64,
    n_classes: *mut usize,
) -> SystoleStatus {
    guard(|| {
        let Some(s) = spectrum.as_ref() else {
            return fail(SystoleStatus::NullPointer, "null spectrum");
        };
        if length.is_null() || rate_num.is_null() || rate_den.is_null() || n_classes.is_null() {
            return fail(SystoleStatus::NullPointer, "null output pointer");
        }
        let Some(e) = s.0.get(i) else {
            return fail(SystoleStatus::OutOfRange, format!("index {i} past {} entries", s.0.len()));
        };
        match (i64::try_from(e.rate.numer()), i64::try_from(e.rate.denom())) {
            (Ok(n), Ok(d)) => {
                *length = e.length.to_f64();
                *rate_num = n;
                *rate_den = d;
                *n_classes = e.classes.len();
                SystoleStatus::Ok
            }
            _ => fail(SystoleStatus::OutOfRange, "rate does not fit in 64 bits"),
        }
    })
}

/// Trace of a word such as `"SSR1"`.
///
/// # Safety
/// `word` must be a NUL-terminated string; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn systole_word_trace(word: *const c_char, re: *mut i64, im: *mut i64) -> SystoleStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return fail(SystoleStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(word) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let w: Word = match text.parse() {
            Ok(w) => w,
            Err(e) => return fail(SystoleStatus::InvalidConfig, format!("{e}")),
        };
        let t = w.trace();
        match (i64::try_from(&t.re), i64::try_from(&t.im)) {
            (Ok(a), Ok(b)) => {
                *re = a;
                *im = b;
                SystoleStatus::Ok
            }
            _ => fail(SystoleStatus::OutOfRange, "trace does not fit in 64 bits"),
        }
    })
}
