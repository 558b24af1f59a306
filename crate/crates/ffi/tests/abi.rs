use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use reeb_ffi::*;

const Y: &str = "v 0 0\nv 1 1\nv 2 2\nv 3 3\ne 0 2\ne 1 2\ne 2 3\n";
const Y_PERTURBED: &str = "v 0 0\nv 1 1.05\nv 2 1.95\nv 3 3\ne 0 2\ne 1 2\ne 2 3\n";

fn parse(text: &str) -> *mut ReebGraphHandle {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { reeb_graph_parse(c.as_ptr(), &mut g) }, ReebStatus::Ok);
    g
}

/// Copies and frees a library string.
fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { reeb_string_free(s) };
    out
}

fn last_error() -> String {
    let p = reeb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn parse_print_diagram() {
    let g = parse(Y);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { reeb_graph_print(g, &mut s) }, ReebStatus::Ok);
    assert_eq!(take(s), Y);
    assert_eq!(unsafe { reeb_diagram_compute(g, &mut s) }, ReebStatus::Ok);
    assert_eq!(take(s), "Ord0 1 2\nExt0 0 3\n");
    assert!(reeb_last_error_message().is_null());
    unsafe { reeb_graph_free(g) };
}

#[test]
fn distances_and_isomorphism() {
    let (a, b) = (parse(Y), parse(Y_PERTURBED));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { reeb_bottleneck(a, b, &mut s) }, ReebStatus::Ok);
    assert_eq!(take(s), "0.05");
    let mut iso: c_int = -1;
    assert_eq!(unsafe { reeb_is_level_isomorphic(a, b, &mut iso) }, ReebStatus::Ok);
    assert_eq!(iso, 0);
    assert_eq!(unsafe { reeb_is_level_isomorphic(a, a, &mut iso) }, ReebStatus::Ok);
    assert_eq!(iso, 1);
    unsafe {
        reeb_graph_free(a);
        reeb_graph_free(b);
    }
}

#[test]
fn operators_return_certificates() {
    let g = parse(Y);
    let (lo, hi) = (CString::new("1.8").unwrap(), CString::new("2.6").unwrap());
    let (mut out, mut cert) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { reeb_merge(g, lo.as_ptr(), hi.as_ptr(), &mut out, &mut cert) }, ReebStatus::Ok);
    assert_eq!(take(cert), "0.4");
    let mut d = ptr::null_mut();
    unsafe { reeb_diagram_compute(out, &mut d) };
    assert_eq!(take(d), "Ord0 1 2.2\nExt0 0 3\n");
    unsafe { reeb_graph_free(out) };

    let alpha = CString::new("1").unwrap();
    assert_eq!(unsafe { reeb_simplify(g, alpha.as_ptr(), &mut out, &mut cert) }, ReebStatus::Ok);
    take(cert);
    unsafe { reeb_diagram_compute(out, &mut d) };
    assert_eq!(take(d), "Ext0 0 3\n");
    unsafe {
        reeb_graph_free(out);
        reeb_graph_free(g);
    }
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("v 0 0\nv 1 oops\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { reeb_graph_parse(bad.as_ptr(), &mut g) }, ReebStatus::ParseError);
    assert!(g.is_null());
    assert!(last_error().contains("line 2"));

    let level = CString::new("v 0 1\nv 1 1\ne 0 1\n").unwrap();
    assert_eq!(unsafe { reeb_graph_parse(level.as_ptr(), &mut g) }, ReebStatus::InvalidGraph);

    assert_eq!(unsafe { reeb_graph_parse(ptr::null(), &mut g) }, ReebStatus::NullPointer);

    let y = parse(Y);
    let (lo, hi) = (CString::new("2").unwrap(), CString::new("1").unwrap());
    let (mut out, mut cert) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { reeb_merge(y, lo.as_ptr(), hi.as_ptr(), &mut out, &mut cert) }, ReebStatus::InvalidParams);
    assert!(out.is_null() && cert.is_null());
    let zero = CString::new("0").unwrap();
    assert_eq!(unsafe { reeb_simplify(y, zero.as_ptr(), &mut out, &mut cert) }, ReebStatus::InvalidParams);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { reeb_bottleneck(y, ptr::null(), &mut s) }, ReebStatus::NullPointer);
    unsafe {
        reeb_graph_free(y);
        reeb_graph_free(ptr::null_mut());
        reeb_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/reeb.h")).unwrap();
    for name in [
        "reeb_graph_parse",
        "reeb_graph_free",
        "reeb_graph_print",
        "reeb_diagram_compute",
        "reeb_bottleneck",
        "reeb_merge",
        "reeb_simplify",
        "reeb_is_level_isomorphic",
        "reeb_string_free",
        "reeb_last_error_message",
        "typedef struct ReebGraphHandle ReebGraphHandle",
        "REEB_STATUS_OK = 0",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
