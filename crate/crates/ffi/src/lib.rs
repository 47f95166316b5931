//! C bindings for `kwidth`.
//!
//! Curves are opaque `KwCurve` handles. Every fallible call returns a
//! `KwStatus`; on failure `kw_last_error_message` describes the error for the
//! calling thread. Strings returned through `char **` must be released with
//! `kw_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kwidth::curve_model::{project_xy, width1, ParamCurve3};
use kwidth::features::fabricius_bjerre_check;
use kwidth::generators::{generate, GeneratorSpec};
use kwidth::graphic::width2;
use kwidth::oracle::grid_width2;
use kwidth::report::{analyze, to_json_string, AnalyzeOptions};
use kwidth::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidCurve = 4,
    Degenerate = 5,
    NotGeneric = 6,
    PerturbationFailed = 7,
    Inconsistent = 8,
    LowConfidence = 9,
    FlagViolation = 10,
    Io = 11,
    Panic = 12,
}

/// Opaque curve handle.
pub struct KwCurve {
    inner: ParamCurve3,
}

/// Planar feature counts of the xy-projection.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct KwFeatureCounts {
    pub crossings: u64,
    pub inflections: u64,
    pub bitangents: u64,
    pub interior_bitangents: u64,
    pub total_curvature: f64,
    /// Residual numerator; denominator is `fb_denominator`.
    pub fb_numerator: i64,
    pub fb_denominator: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> KwStatus {
    match e {
        Error::InvalidCurve(_) => KwStatus::InvalidCurve,
        Error::DegenerateProjection(_)
        | Error::DegenerateHeights(_)
        | Error::NonTransverseCrossing { .. }
        | Error::DegenerateInflection { .. }
        | Error::NearTripleTangency(_)
        | Error::TangentLine => KwStatus::Degenerate,
        Error::NotGeneric(_) => KwStatus::NotGeneric,
        Error::PerturbationFailed { .. } | Error::CurvatureSignFailure { .. } => KwStatus::PerturbationFailed,
        Error::ArrangementInconsistent(_) | Error::WidthMismatch(_) => KwStatus::Inconsistent,
        Error::LowConfidence { .. } => KwStatus::LowConfidence,
        Error::FlagViolation(_) => KwStatus::FlagViolation,
        Error::Parse(_) | Error::Json(_) => KwStatus::Parse,
        Error::Io(_) => KwStatus::Io,
    }
}

fn fail(status: KwStatus, msg: String) -> KwStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), KwStatus>) -> KwStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KwStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(KwStatus::Panic, msg)
        }
    }
}

fn lift<T>(r: kwidth::Result<T>) -> Result<T, KwStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, KwStatus> {
    if s.is_null() {
        return Err(fail(KwStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(KwStatus::InvalidUtf8, e.to_string()))
}

unsafe fn curve_ref<'a>(c: *const KwCurve) -> Result<&'a ParamCurve3, KwStatus> {
    c.as_ref()
        .map(|c| &c.inner)
        .ok_or_else(|| fail(KwStatus::NullPointer, "null curve".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), KwStatus> {
    if out.is_null() {
        return Err(fail(KwStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), KwStatus> {
    let c = CString::new(s).map_err(|e| fail(KwStatus::Parse, e.to_string()))?;
    write_out(out, c.into_raw())
}

/// Parses a curve from its JSON file contents.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kw_curve_from_json(json: *const c_char, out: *mut *mut KwCurve) -> KwStatus {
    guard(|| {
        let s = read_str(json)?;
        let curve = lift(ParamCurve3::from_json_str(s))?;
        write_out(out, Box::into_raw(Box::new(KwCurve { inner: curve })))
    })
}

/// Builds a curve from a generator spec such as `{"kind":"torus_2braid","q":3}`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kw_curve_generate(spec_json: *const c_char, out: *mut *mut KwCurve) -> KwStatus {
    guard(|| {
        let s = read_str(spec_json)?;
        let spec: GeneratorSpec = lift(serde_json::from_str(s).map_err(Error::from))?;
        let curve = lift(generate(&spec))?;
        write_out(out, Box::into_raw(Box::new(KwCurve { inner: curve })))
    })
}

/// Releases a curve. Null is ignored.
///
/// # Safety
/// `curve` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kw_curve_free(curve: *mut KwCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Number of components, or 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kw_curve_component_count(curve: *const KwCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.inner.components.len())
}

/// Serializes a curve to JSON.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kw_curve_to_json(curve: *const KwCurve, out: *mut *mut c_char) -> KwStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        let s = lift(c.to_json_string())?;
        write_string(out, s)
    })
}

/// Second width of the xy-projection.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kw_width2(curve: *const KwCurve, out: *mut u64) -> KwStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        let pc = lift(project_xy(c))?;
        let w = lift(width2(&pc))?;
        write_out(out, w.w2 as u64)
    })
}

/// Height-function width (twice the number of maxima).
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kw_width1(curve: *const KwCurve, out: *mut u64) -> KwStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        let w = lift(width1(c))?;
        write_out(out, w as u64)
    })
}

/// Crossing, inflection and bitangent counts of the xy-projection.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kw_features(curve: *const KwCurve, out: *mut KwFeatureCounts) -> KwStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        let pc = lift(project_xy(c))?;
        let r = lift(fabricius_bjerre_check(&pc))?;
        write_out(
            out,
            KwFeatureCounts {
                crossings: r.c as u64,
                inflections: r.i as u64,
                bitangents: r.t as u64,
                interior_bitangents: r.s as u64,
                total_curvature: r.total_curvature,
                fb_numerator: r.fb_residual.numerator,
                fb_denominator: r.fb_residual.denominator,
            },
        )
    })
}

/// Grid estimate of the second width on an `nt × nd` grid.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kw_grid_width2(
    curve: *const KwCurve,
    nt: u32,
    nd: u32,
    refine_rounds: u32,
    out: *mut u64,
) -> KwStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        let pc = lift(project_xy(c))?;
        let (w, _) = lift(grid_width2(&pc, (nt as usize, nd as usize), refine_rounds))?;
        write_out(out, w)
    })
}

/// Full analysis as JSON. A nonzero `use_seed` enables perturbation with `seed`.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kw_analyze(curve: *const KwCurve, use_seed: i32, seed: u64, out: *mut *mut c_char) -> KwStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        let opts = AnalyzeOptions {
            perturb_seed: (use_seed != 0).then_some(seed),
            ..AnalyzeOptions::default()
        };
        let a = lift(analyze(c, &opts))?;
        let s = lift(to_json_string(&a))?;
        write_string(out, s)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn kw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version string.
#[no_mangle]
pub extern "C" fn kw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
