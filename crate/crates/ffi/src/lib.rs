//! C ABI over `motivic_cover`.
//!
//! Objects are opaque handles created by `mc_*_parse` / `mc_*_from_json`
//! and released with the matching `mc_*_free`. Every fallible call returns
//! an [`MCStatus`]; on failure `mc_last_error_message` describes the error
//! for the calling thread. Strings handed out by the library are released
//! with `mc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use num_bigint::BigInt;

use motivic_cover::blowup::{blowup, check_invariance, Verdict};
use motivic_cover::config::{ComponentSet, Configuration};
use motivic_cover::format;
use motivic_cover::milnor::{self, MilnorSelection, ResolutionGraph};
use motivic_cover::motive::motive;
use motivic_cover::realization::{euler, zeta};
use motivic_cover::ring::RingElement;
use motivic_cover::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MCStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidConfiguration = 4,
    InvalidCenter = 5,
    InvalidGraph = 6,
    Unrepresentable = 7,
    EmptySelection = 8,
    UnknownComponent = 9,
    Overflow = 10,
    Internal = 11,
}

/// Element of the Grothendieck ring model.
pub struct MCRing(RingElement);

/// Validated configuration of a divisor.
pub struct MCConfig(Configuration);

/// Resolution graph of a plane curve germ.
pub struct MCGraph(ResolutionGraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: MCStatus, msg: impl Into<String>) -> MCStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> MCStatus {
    match e {
        Error::UnknownComponent(_) => MCStatus::UnknownComponent,
        Error::MissingStratum(_) | Error::InvalidConfiguration(_) => MCStatus::InvalidConfiguration,
        Error::Unrepresentable { .. } => MCStatus::Unrepresentable,
        Error::InvalidCenter(_) => MCStatus::InvalidCenter,
        Error::InvalidGraph(_) => MCStatus::InvalidGraph,
        Error::EmptySelection => MCStatus::EmptySelection,
        Error::Format { .. } => MCStatus::Parse,
        Error::DegreeBound { .. } => MCStatus::Overflow,
    }
}

fn from_error(e: Error) -> MCStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning panics into [`MCStatus::Internal`].
fn guard(f: impl FnOnce() -> Result<(), MCStatus>) -> MCStatus {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(())) => MCStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(MCStatus::Internal, "internal error"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, MCStatus> {
    if s.is_null() {
        return Err(fail(MCStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(MCStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, MCStatus> {
    p.as_ref().ok_or_else(|| fail(MCStatus::NullPointer, "null handle"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), MCStatus> {
    if out.is_null() {
        return Err(fail(MCStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), MCStatus> {
    let c = CString::new(s).map_err(|_| fail(MCStatus::Internal, "string contains NUL"))?;
    put(out, c.into_raw())
}

unsafe fn put_boxed<T>(out: *mut *mut T, value: T) -> Result<(), MCStatus> {
    if out.is_null() {
        return Err(fail(MCStatus::NullPointer, "null output pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn config_selection(c: &Configuration, spec: *const c_char) -> Result<ComponentSet, MCStatus> {
    let spec = if spec.is_null() { "all" } else { read_str(spec)? };
    c.select(spec).map_err(from_error)
}

unsafe fn graph_selection(spec: *const c_char) -> Result<MilnorSelection, MCStatus> {
    let spec = if spec.is_null() { "exceptional" } else { read_str(spec)? };
    Ok(match spec.trim() {
        "exceptional" => MilnorSelection::Exceptional,
        list => MilnorSelection::Ids(list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(Into::into).collect()),
    })
}

fn to_i64(x: &BigInt) -> Result<i64, MCStatus> {
    i64::try_from(x).map_err(|_| fail(MCStatus::Overflow, format!("{x} does not fit in 64 bits")))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a ring element such as `[mu_2]*(L-1)^2 + 3`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_parse(text: *const c_char, out: *mut *mut MCRing) -> MCStatus {
    guard(|| {
        let s = read_str(text)?;
        let x: RingElement = s.parse().map_err(|e| fail(MCStatus::Parse, format!("{e}")))?;
        put_boxed(out, MCRing(x))
    })
}

/// # Safety
/// `a`, `b` must be live ring handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_add(a: *const MCRing, b: *const MCRing, out: *mut *mut MCRing) -> MCStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        put_boxed(out, MCRing(&a.0 + &b.0))
    })
}

/// # Safety
/// `a`, `b` must be live ring handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_mul(a: *const MCRing, b: *const MCRing, out: *mut *mut MCRing) -> MCStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        put_boxed(out, MCRing(&a.0 * &b.0))
    })
}

/// # Safety
/// `a` must be a live ring handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_pow(a: *const MCRing, e: u32, out: *mut *mut MCRing) -> MCStatus {
    guard(|| put_boxed(out, MCRing(handle(a)?.0.pow(e))))
}

/// # Safety
/// `a`, `b` must be live ring handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_equal(a: *const MCRing, b: *const MCRing, out: *mut bool) -> MCStatus {
    guard(|| put(out, handle(a)?.0 == handle(b)?.0))
}

/// Canonical text form; free with `mc_string_free`.
///
/// # Safety
/// `a` must be a live ring handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_render(a: *const MCRing, out: *mut *mut c_char) -> MCStatus {
    guard(|| put_string(out, handle(a)?.0.to_string()))
}

/// Euler characteristic of the realization.
///
/// # Safety
/// `a` must be a live ring handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_euler(a: *const MCRing, out: *mut i64) -> MCStatus {
    guard(|| put(out, to_i64(&euler(&handle(a)?.0))?))
}

/// Zeta function of the realization as `(1-t^n)^e ...`; free with
/// `mc_string_free`.
///
/// # Safety
/// `a` must be a live ring handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_zeta(a: *const MCRing, out: *mut *mut c_char) -> MCStatus {
    guard(|| put_string(out, zeta(&handle(a)?.0).to_string()))
}

/// # Safety
/// `a` must be NULL or a handle from this library that is not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_ring_free(a: *mut MCRing) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Parses and validates a configuration.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_config_from_json(json: *const c_char, out: *mut *mut MCConfig) -> MCStatus {
    guard(|| {
        let c = format::config_from_json(read_str(json)?).map_err(from_error)?;
        put_boxed(out, MCConfig(c))
    })
}

/// Validates a configuration document without keeping it. On
/// [`MCStatus::InvalidConfiguration`] the diagnostics are in
/// `mc_last_error_message`.
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mc_config_validate(json: *const c_char) -> MCStatus {
    guard(|| format::config_from_json(read_str(json)?).map(drop).map_err(from_error))
}

/// # Safety
/// `c` must be a live configuration handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_config_to_json(c: *const MCConfig, out: *mut *mut c_char) -> MCStatus {
    guard(|| put_string(out, format::config_to_json(&handle(c)?.0).map_err(from_error)?))
}

/// # Safety
/// `c` must be NULL or a handle from this library that is not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_config_free(c: *mut MCConfig) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// `S^A` for the selection `all`, `exceptional` or a comma-separated id
/// list. A NULL selection means `all`.
///
/// # Safety
/// `c` must be a live configuration handle, `selection` NULL or a
/// NUL-terminated string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_motive(c: *const MCConfig, selection: *const c_char, out: *mut *mut MCRing) -> MCStatus {
    guard(|| {
        let c = &handle(c)?.0;
        let a = config_selection(c, selection)?;
        put_boxed(out, MCRing(motive(c, &a).map_err(from_error)?))
    })
}

/// Blows up along the center given as JSON. `exceptional_id` receives the
/// name of the new component and may be NULL.
///
/// # Safety
/// `c` must be a live configuration handle, `center_json` a NUL-terminated
/// string, `out` a valid pointer and `exceptional_id` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn mc_blowup(
    c: *const MCConfig,
    center_json: *const c_char,
    out: *mut *mut MCConfig,
    exceptional_id: *mut *mut c_char,
) -> MCStatus {
    guard(|| {
        let c = &handle(c)?.0;
        let center = format::center_from_json(read_str(center_json)?).map_err(from_error)?;
        let b = blowup(c, &center).map_err(from_error)?;
        if !exceptional_id.is_null() {
            put_string(exceptional_id, b.exceptional.to_string())?;
        }
        put_boxed(out, MCConfig(b.config))
    })
}

/// Compares `S^A` before and after the blow-up. `passed` receives the
/// verdict; `report` receives a readable report and may be NULL.
///
/// # Safety
/// `c` must be a live configuration handle, `center_json` a NUL-terminated
/// string, `selection` NULL or a NUL-terminated string, `passed` a valid
/// pointer and `report` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn mc_check_invariance(
    c: *const MCConfig,
    center_json: *const c_char,
    selection: *const c_char,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> MCStatus {
    guard(|| {
        let c = &handle(c)?.0;
        let center = format::center_from_json(read_str(center_json)?).map_err(from_error)?;
        let a = config_selection(c, selection)?;
        let rep = check_invariance(c, &center, &a).map_err(from_error)?;
        put(passed, rep.verdict == Verdict::Pass)?;
        if !report.is_null() {
            put_string(report, rep.to_string())?;
        }
        Ok(())
    })
}

/// Parses and validates a resolution graph.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_from_json(json: *const c_char, out: *mut *mut MCGraph) -> MCStatus {
    guard(|| {
        let g = format::graph_from_json(read_str(json)?).map_err(from_error)?;
        put_boxed(out, MCGraph(g))
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library that is not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_free(g: *mut MCGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Motivic Milnor fiber over the selection (NULL means `exceptional`).
/// Fails with [`MCStatus::Unrepresentable`] when a selected vertex has a
/// cover of positive genus.
///
/// # Safety
/// `g` must be a live graph handle, `selection` NULL or a NUL-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_milnor_fiber(g: *const MCGraph, selection: *const c_char, out: *mut *mut MCRing) -> MCStatus {
    guard(|| {
        let g = &handle(g)?.0;
        let sel = graph_selection(selection)?;
        put_boxed(out, MCRing(milnor::motivic_milnor_fiber(g, &sel).map_err(from_error)?))
    })
}

/// Euler characteristic of the Milnor fiber.
///
/// # Safety
/// `g` must be a live graph handle, `selection` NULL or a NUL-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_milnor_euler(g: *const MCGraph, selection: *const c_char, out: *mut i64) -> MCStatus {
    guard(|| {
        let g = &handle(g)?.0;
        let sel = graph_selection(selection)?;
        put(out, to_i64(&milnor::milnor_euler(g, &sel).map_err(from_error)?)?)
    })
}

/// Monodromy zeta function from the graph; free with `mc_string_free`.
///
/// # Safety
/// `g` must be a live graph handle, `selection` NULL or a NUL-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_acampo_zeta(g: *const MCGraph, selection: *const c_char, out: *mut *mut c_char) -> MCStatus {
    guard(|| {
        let g = &handle(g)?.0;
        let sel = graph_selection(selection)?;
        put_string(out, milnor::acampo_zeta(g, &sel).map_err(from_error)?.to_string())
    })
}
