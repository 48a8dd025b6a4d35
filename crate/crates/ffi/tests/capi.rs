//! Exercises the C API through the exported symbols, as a C caller would.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use crn_mono_ffi::*;

const MICHAELIS: &str = "E + S <-> ES @ 0.1, 1000\nES -> E + P @ 0.3\ninit E = 10\ninit S = 100\ninput S\noutput P\n";
const COMPETING: &str = "R1: A -> B @ 1\nR2: A + B -> C @ 1\ninput A\noutput C\n";

fn parse_ok(text: &str) -> *mut CrnDocument {
    let c = CString::new(text).unwrap();
    let mut doc: *mut CrnDocument = ptr::null_mut();
    let status = unsafe { crn_parse(c.as_ptr(), &mut doc) };
    assert_eq!(status, CrnStatus::CrnOk);
    assert!(!doc.is_null());
    doc
}

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { crn_string_free(ptr) };
    s
}

fn last_error() -> String {
    let ptr = crn_last_error();
    assert!(!ptr.is_null());
    unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string()
}

#[test]
fn parse_and_inspect() {
    let doc = parse_ok(MICHAELIS);
    assert_eq!(unsafe { crn_num_species(doc) }, 4);
    assert_eq!(unsafe { crn_num_reactions(doc) }, 2);
    unsafe { crn_document_free(doc) };
}

#[test]
fn parse_error_sets_message() {
    let c = CString::new("A -> B\n").unwrap();
    let mut doc: *mut CrnDocument = ptr::null_mut();
    let status = unsafe { crn_parse(c.as_ptr(), &mut doc) };
    assert_eq!(status, CrnStatus::CrnParseError);
    assert!(doc.is_null());
    assert!(last_error().starts_with("1:"));
}

#[test]
fn parse_null_arguments() {
    let mut doc: *mut CrnDocument = ptr::null_mut();
    assert_eq!(
        unsafe { crn_parse(ptr::null(), &mut doc) },
        CrnStatus::CrnNullPointer
    );
    let c = CString::new("A -> B @ 1\n").unwrap();
    assert_eq!(
        unsafe { crn_parse(c.as_ptr(), ptr::null_mut()) },
        CrnStatus::CrnNullPointer
    );
}

#[test]
fn analyze_uses_declared_pair() {
    let doc = parse_ok(MICHAELIS);
    let mut verdict = CrnVerdict::CrnInconclusive;
    let status = unsafe { crn_analyze(doc, ptr::null(), ptr::null(), &mut verdict) };
    assert_eq!(status, CrnStatus::CrnOk);
    assert_eq!(verdict, CrnVerdict::CrnPositivelyMonotonic);
    unsafe { crn_document_free(doc) };
}

#[test]
fn analyze_explicit_pair_and_errors() {
    let doc = parse_ok(MICHAELIS);
    let s = CString::new("S").unwrap();
    let e = CString::new("E").unwrap();
    let zz = CString::new("Zz").unwrap();
    let mut verdict = CrnVerdict::CrnInconclusive;
    assert_eq!(
        unsafe { crn_analyze(doc, s.as_ptr(), e.as_ptr(), &mut verdict) },
        CrnStatus::CrnOk
    );
    assert_eq!(
        unsafe { crn_analyze(doc, s.as_ptr(), zz.as_ptr(), &mut verdict) },
        CrnStatus::CrnUsageError
    );
    assert!(last_error().contains("Zz"));
    assert_eq!(
        unsafe { crn_analyze(doc, s.as_ptr(), s.as_ptr(), &mut verdict) },
        CrnStatus::CrnUsageError
    );
    assert_eq!(
        unsafe { crn_analyze(ptr::null(), ptr::null(), ptr::null(), &mut verdict) },
        CrnStatus::CrnNullPointer
    );
    unsafe { crn_document_free(doc) };
}

#[test]
fn analyze_inconclusive_network() {
    let doc = parse_ok(COMPETING);
    let mut verdict = CrnVerdict::CrnPositivelyMonotonic;
    assert_eq!(
        unsafe { crn_analyze(doc, ptr::null(), ptr::null(), &mut verdict) },
        CrnStatus::CrnOk
    );
    assert_eq!(verdict, CrnVerdict::CrnInconclusive);
    unsafe { crn_document_free(doc) };
}

#[test]
fn analyze_json_report() {
    let doc = parse_ok(MICHAELIS);
    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { crn_analyze_json(doc, ptr::null(), ptr::null(), &mut json) },
        CrnStatus::CrnOk
    );
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["verdict"], "PositivelyMonotonic");
    assert_eq!(v["sigma_product"], 1);
    unsafe { crn_document_free(doc) };
}

#[test]
fn graph_dot_renders_both_kinds() {
    let doc = parse_ok(MICHAELIS);
    let mut dot: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe {
            crn_graph_dot(
                doc,
                CrnGraphKind::CrnGraphSr,
                false,
                ptr::null(),
                ptr::null(),
                &mut dot,
            )
        },
        CrnStatus::CrnOk
    );
    assert!(take_string(dot).starts_with("digraph sr {"));
    let mut dot: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe {
            crn_graph_dot(
                doc,
                CrnGraphKind::CrnGraphR,
                true,
                ptr::null(),
                ptr::null(),
                &mut dot,
            )
        },
        CrnStatus::CrnOk
    );
    let rendered = take_string(dot);
    assert!(rendered.starts_with("graph r {"));
    assert!(rendered.contains("R_IN"));
    unsafe { crn_document_free(doc) };
}

#[test]
fn sweep_csv_round_trips() {
    let doc = parse_ok("R1: A -> B @ 1\ninput A\noutput B\n");
    let mut csv: *mut c_char = ptr::null_mut();
    let status = unsafe {
        crn_sweep_csv(
            doc,
            ptr::null(),
            ptr::null(),
            1.0,
            4.0,
            4,
            false,
            50.0,
            &mut csv,
        )
    };
    assert_eq!(status, CrnStatus::CrnOk);
    let csv = take_string(csv);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("input_value,output_ss,converged"));
    let outputs: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(outputs.len(), 4);
    assert!(outputs.windows(2).all(|w| w[0] < w[1]));
    unsafe { crn_document_free(doc) };
}

#[test]
fn sweep_rejects_bad_ranges() {
    let doc = parse_ok("R1: A -> B @ 1\ninput A\noutput B\n");
    let mut csv: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe {
            crn_sweep_csv(
                doc,
                ptr::null(),
                ptr::null(),
                4.0,
                1.0,
                4,
                false,
                50.0,
                &mut csv,
            )
        },
        CrnStatus::CrnUsageError
    );
    assert_eq!(
        unsafe {
            crn_sweep_csv(
                doc,
                ptr::null(),
                ptr::null(),
                0.0,
                1.0,
                4,
                true,
                50.0,
                &mut csv,
            )
        },
        CrnStatus::CrnUsageError
    );
    unsafe { crn_document_free(doc) };
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        crn_document_free(ptr::null_mut());
        crn_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/crn_mono.h");
    let text = std::fs::read_to_string(header).unwrap();
    for symbol in [
        "crn_parse",
        "crn_document_free",
        "crn_analyze",
        "crn_analyze_json",
        "crn_graph_dot",
        "crn_sweep_csv",
        "crn_string_free",
        "crn_last_error",
        "typedef struct CrnDocument CrnDocument;",
    ] {
        assert!(text.contains(symbol), "header misses {symbol}");
    }
}
