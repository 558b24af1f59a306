//! C ABI over `reeb-core`.
//!
//! Graphs cross the boundary as opaque `ReebGraphHandle` pointers. Every
//! fallible call returns a `ReebStatus`; on failure the message is available
//! from `reeb_last_error_message` until the next call on the same thread.
//! Strings handed out by this library must be released with
//! `reeb_string_free`, graphs with `reeb_graph_free`. Values cross as exact
//! decimal (or `p/q`) strings.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use reeb_core::bottleneck::graph_bottleneck;
use reeb_core::io::{parse_graph_any, print_graph};
use reeb_core::iso::is_level_isomorphic;
use reeb_core::operators::{merge_certified, simplify, MergeParams, Transformed};
use reeb_core::persistence::extended_diagram;
use reeb_core::{Error, ReebGraph, Value};

/// Opaque graph handle.
pub struct ReebGraphHandle(ReebGraph);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReebStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidGraph = 4,
    InvalidParams = 5,
    Internal = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ReebStatus {
    match e {
        Error::Parse { .. } | Error::BadValue(_) | Error::Json(_) => ReebStatus::ParseError,
        Error::InvalidGraph(_) | Error::TooFewCriticalValues | Error::NotMonotone { .. } => ReebStatus::InvalidGraph,
        Error::BadParams(_) | Error::CriticalInInterval { .. } | Error::BadPoint(_) => ReebStatus::InvalidParams,
        _ => ReebStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), (ReebStatus, String)>) -> ReebStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ReebStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ReebStatus::Internal
        }
    }
}

type Fallible<T> = Result<T, (ReebStatus, String)>;

fn core<T>(r: reeb_core::Result<T>) -> Fallible<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Fallible<&'a str> {
    if p.is_null() {
        return Err((ReebStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (ReebStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn graph_arg<'a>(p: *const ReebGraphHandle, what: &str) -> Fallible<&'a ReebGraph> {
    p.as_ref()
        .map(|h| &h.0)
        .ok_or((ReebStatus::NullPointer, format!("{what} is null")))
}

fn value_arg(s: &str) -> Fallible<Value> {
    core(s.parse())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Fallible<()> {
    if out.is_null() {
        return Err((ReebStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

unsafe fn put_graph(out: *mut *mut ReebGraphHandle, g: ReebGraph) -> Fallible<()> {
    if out.is_null() {
        return Err((ReebStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(ReebGraphHandle(g)));
    Ok(())
}

unsafe fn put_transformed(t: Transformed, out: *mut *mut ReebGraphHandle, certificate: *mut *mut c_char) -> Fallible<()> {
    if out.is_null() || certificate.is_null() {
        return Err((ReebStatus::NullPointer, "output pointer is null".into()));
    }
    put_string(certificate, t.certificate.to_string())?;
    put_graph(out, t.graph)
}

/// Parses a graph in the text or JSON format and validates it.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_graph_parse(text: *const c_char, out: *mut *mut ReebGraphHandle) -> ReebStatus {
    guard(|| {
        let g = core(parse_graph_any(str_arg(text, "text")?))?;
        core(g.check(true))?;
        put_graph(out, g)
    })
}

/// Releases a graph; null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn reeb_graph_free(g: *mut ReebGraphHandle) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Text form of a graph.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_graph_print(g: *const ReebGraphHandle, out: *mut *mut c_char) -> ReebStatus {
    guard(|| put_string(out, print_graph(graph_arg(g, "graph")?)))
}

/// Extended persistence diagram, one `<kind> <birth> <death>` line per point.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_diagram_compute(g: *const ReebGraphHandle, out: *mut *mut c_char) -> ReebStatus {
    guard(|| {
        let d = core(extended_diagram(graph_arg(g, "graph")?))?;
        put_string(out, d.to_text())
    })
}

/// Bottleneck distance between the diagrams of two graphs, as an exact string.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_bottleneck(
    a: *const ReebGraphHandle,
    b: *const ReebGraphHandle,
    out: *mut *mut c_char,
) -> ReebStatus {
    guard(|| {
        let d = core(graph_bottleneck(graph_arg(a, "first graph")?, graph_arg(b, "second graph")?))?;
        put_string(out, d.to_string())
    })
}

/// Merges the band `[lo, hi]`; writes the new graph and its distance certificate.
///
/// # Safety
/// Pointers must be valid as described for the other calls.
#[no_mangle]
pub unsafe extern "C" fn reeb_merge(
    g: *const ReebGraphHandle,
    lo: *const c_char,
    hi: *const c_char,
    out: *mut *mut ReebGraphHandle,
    certificate: *mut *mut c_char,
) -> ReebStatus {
    guard(|| {
        let g = graph_arg(g, "graph")?;
        let p = core(MergeParams::new(value_arg(str_arg(lo, "lo")?)?, value_arg(str_arg(hi, "hi")?)?))?;
        put_transformed(core(merge_certified(g, &p))?, out, certificate)
    })
}

/// Removes every feature of span at most `alpha`.
///
/// # Safety
/// Pointers must be valid as described for the other calls.
#[no_mangle]
pub unsafe extern "C" fn reeb_simplify(
    g: *const ReebGraphHandle,
    alpha: *const c_char,
    out: *mut *mut ReebGraphHandle,
    certificate: *mut *mut c_char,
) -> ReebStatus {
    guard(|| {
        let g = graph_arg(g, "graph")?;
        let alpha = value_arg(str_arg(alpha, "alpha")?)?;
        put_transformed(core(simplify(g, alpha))?, out, certificate)
    })
}

/// Writes 1 when the graphs are level-isomorphic, 0 otherwise.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_is_level_isomorphic(
    a: *const ReebGraphHandle,
    b: *const ReebGraphHandle,
    out: *mut c_int,
) -> ReebStatus {
    guard(|| {
        let iso = is_level_isomorphic(graph_arg(a, "first graph")?, graph_arg(b, "second graph")?);
        if out.is_null() {
            return Err((ReebStatus::NullPointer, "output pointer is null".into()));
        }
        *out = c_int::from(iso);
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn reeb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn reeb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
