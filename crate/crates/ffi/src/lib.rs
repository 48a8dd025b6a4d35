//! C API over the `crn-mono` library.
//!
//! Conventions: documents are opaque handles created by [`crn_parse`] and
//! released with [`crn_document_free`]; every returned string is owned by the
//! caller and must be released with [`crn_string_free`]; functions report a
//! [`CrnStatus`], with a per-thread detail message available from
//! [`crn_last_error`]. Passing a null document or output pointer is an error,
//! not undefined behaviour; string arguments marked optional may be null.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crn_mono::graphs::{
    augment, build_r_graph, build_sr_graph, check_io_monotonicity, r_graph_to_dot, sr_graph_to_dot,
    VerdictKind,
};
use crn_mono::parser::{parse, NetworkDocument};
use crn_mono::report::verdict_json;
use crn_mono::sim::{sweep, sweep_csv, SimConfig};

/// Opaque handle to a parsed network document.
pub struct CrnDocument {
    doc: NetworkDocument,
}

/// Status code of every fallible API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrnStatus {
    CrnOk = 0,
    /// a required pointer argument was null
    CrnNullPointer = 1,
    /// a string argument was not valid UTF-8
    CrnInvalidUtf8 = 2,
    /// the document text did not parse; see `crn_last_error`
    CrnParseError = 3,
    /// bad species names or analysis arguments
    CrnUsageError = 4,
    /// the numerical integration failed
    CrnNumericError = 5,
    /// an internal invariant was violated
    CrnInternalError = 6,
}

/// Structural verdict for an input/output species pair.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrnVerdict {
    CrnInconclusive = 0,
    CrnPositivelyMonotonic = 1,
    CrnNegativelyMonotonic = 2,
}

/// Which graph `crn_graph_dot` renders.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrnGraphKind {
    CrnGraphSr = 0,
    CrnGraphR = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let c = CString::new(message.into().replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Detail message of the most recent failure on this thread, or null.
/// The pointer stays valid until the next API call on the same thread.
#[no_mangle]
pub extern "C" fn crn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

fn guard<F: FnOnce() -> CrnStatus>(f: F) -> CrnStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            CrnStatus::CrnInternalError
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn opt_str<'a>(ptr: *const c_char) -> Result<Option<&'a str>, CrnStatus> {
    if ptr.is_null() {
        return Ok(None);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(Some(s)),
        Err(_) => {
            set_error("argument is not valid UTF-8");
            Err(CrnStatus::CrnInvalidUtf8)
        }
    }
}

fn give_string(s: String, out: *mut *mut c_char) -> CrnStatus {
    let c = CString::new(s.replace('\0', " ")).unwrap();
    unsafe { *out = c.into_raw() };
    CrnStatus::CrnOk
}

/// Resolve the analysis pair: explicit names win over the document's
/// `input`/`output` lines.
fn resolve_io(
    doc: &NetworkDocument,
    input: Option<&str>,
    output: Option<&str>,
) -> Result<(usize, usize), CrnStatus> {
    let pick = |explicit: Option<&str>, declared: &Option<String>, role: &str| {
        let name = explicit.or(declared.as_deref()).ok_or_else(|| {
            set_error(format!("no {role} species given or declared"));
            CrnStatus::CrnUsageError
        })?;
        doc.network.species_id(name).ok_or_else(|| {
            set_error(format!("unknown {role} species `{name}`"));
            CrnStatus::CrnUsageError
        })
    };
    let i = pick(input, &doc.declared_input, "input")?;
    let o = pick(output, &doc.declared_output, "output")?;
    if i == o {
        set_error("input and output must be distinct species");
        return Err(CrnStatus::CrnUsageError);
    }
    Ok((i, o))
}

/// Parse `.crn` text into a document handle stored in `*out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crn_parse(text: *const c_char, out: *mut *mut CrnDocument) -> CrnStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            set_error("null pointer argument");
            return CrnStatus::CrnNullPointer;
        }
        let text = match unsafe { opt_str(text) } {
            Ok(s) => s.unwrap(),
            Err(status) => return status,
        };
        match parse(text) {
            Ok(doc) => {
                unsafe { *out = Box::into_raw(Box::new(CrnDocument { doc })) };
                CrnStatus::CrnOk
            }
            Err(e) => {
                set_error(e.to_string());
                CrnStatus::CrnParseError
            }
        }
    })
}

/// Release a document handle. Null is a no-op.
///
/// # Safety
/// `doc` must be null or a pointer obtained from [`crn_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crn_document_free(doc: *mut CrnDocument) {
    if !doc.is_null() {
        drop(unsafe { Box::from_raw(doc) });
    }
}

/// Number of species in the parsed network.
///
/// # Safety
/// `doc` must be a valid document handle.
#[no_mangle]
pub unsafe extern "C" fn crn_num_species(doc: *const CrnDocument) -> usize {
    if doc.is_null() {
        return 0;
    }
    unsafe { &*doc }.doc.network.num_species()
}

/// Number of reactions in the parsed network.
///
/// # Safety
/// `doc` must be a valid document handle.
#[no_mangle]
pub unsafe extern "C" fn crn_num_reactions(doc: *const CrnDocument) -> usize {
    if doc.is_null() {
        return 0;
    }
    unsafe { &*doc }.doc.network.num_reactions()
}

/// Structural monotonicity verdict for the pair, written to `*out_verdict`.
/// `input`/`output` may be null to use the document's declarations.
///
/// # Safety
/// `doc` and `out_verdict` must be valid; the names null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn crn_analyze(
    doc: *const CrnDocument,
    input: *const c_char,
    output: *const c_char,
    out_verdict: *mut CrnVerdict,
) -> CrnStatus {
    guard(|| {
        if doc.is_null() || out_verdict.is_null() {
            set_error("null pointer argument");
            return CrnStatus::CrnNullPointer;
        }
        let doc = &unsafe { &*doc }.doc;
        let (input, output) = match (unsafe { opt_str(input) }, unsafe { opt_str(output) }) {
            (Ok(i), Ok(o)) => match resolve_io(doc, i, o) {
                Ok(pair) => pair,
                Err(status) => return status,
            },
            (Err(status), _) | (_, Err(status)) => return status,
        };
        match check_io_monotonicity(&doc.network, input, output) {
            Ok(verdict) => {
                let v = match verdict.kind {
                    VerdictKind::PositivelyMonotonic => CrnVerdict::CrnPositivelyMonotonic,
                    VerdictKind::NegativelyMonotonic => CrnVerdict::CrnNegativelyMonotonic,
                    VerdictKind::Inconclusive => CrnVerdict::CrnInconclusive,
                };
                unsafe { *out_verdict = v };
                CrnStatus::CrnOk
            }
            Err(e) => {
                set_error(e.to_string());
                CrnStatus::CrnUsageError
            }
        }
    })
}

/// Full analysis report as a JSON string in `*out_json`.
///
/// # Safety
/// Same contract as [`crn_analyze`]; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn crn_analyze_json(
    doc: *const CrnDocument,
    input: *const c_char,
    output: *const c_char,
    out_json: *mut *mut c_char,
) -> CrnStatus {
    guard(|| {
        if doc.is_null() || out_json.is_null() {
            set_error("null pointer argument");
            return CrnStatus::CrnNullPointer;
        }
        let doc = &unsafe { &*doc }.doc;
        let (input, output) = match (unsafe { opt_str(input) }, unsafe { opt_str(output) }) {
            (Ok(i), Ok(o)) => match resolve_io(doc, i, o) {
                Ok(pair) => pair,
                Err(status) => return status,
            },
            (Err(status), _) | (_, Err(status)) => return status,
        };
        match check_io_monotonicity(&doc.network, input, output) {
            Ok(verdict) => {
                let report = verdict_json(&doc.network, input, output, &verdict);
                give_string(serde_json::to_string_pretty(&report).unwrap(), out_json)
            }
            Err(e) => {
                set_error(e.to_string());
                CrnStatus::CrnUsageError
            }
        }
    })
}

/// DOT rendering of the species-reaction or reaction graph in `*out_dot`.
/// With `augmented` true the dummy input/output reactions are added first,
/// which requires a resolvable input/output pair.
///
/// # Safety
/// `doc` and `out_dot` must be valid; the names null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn crn_graph_dot(
    doc: *const CrnDocument,
    kind: CrnGraphKind,
    augmented: bool,
    input: *const c_char,
    output: *const c_char,
    out_dot: *mut *mut c_char,
) -> CrnStatus {
    guard(|| {
        if doc.is_null() || out_dot.is_null() {
            set_error("null pointer argument");
            return CrnStatus::CrnNullPointer;
        }
        let doc = &unsafe { &*doc }.doc;
        let network = if augmented {
            let (input, output) = match (unsafe { opt_str(input) }, unsafe { opt_str(output) }) {
                (Ok(i), Ok(o)) => match resolve_io(doc, i, o) {
                    Ok(pair) => pair,
                    Err(status) => return status,
                },
                (Err(status), _) | (_, Err(status)) => return status,
            };
            match augment(&doc.network, input, output) {
                Ok(net) => net,
                Err(e) => {
                    set_error(e.to_string());
                    return CrnStatus::CrnUsageError;
                }
            }
        } else {
            doc.network.clone()
        };
        let dot = match kind {
            CrnGraphKind::CrnGraphSr => sr_graph_to_dot(&build_sr_graph(&network)),
            CrnGraphKind::CrnGraphR => r_graph_to_dot(&build_r_graph(&network)),
        };
        give_string(dot, out_dot)
    })
}

/// Sweep the input's initial concentration over `points` values spaced
/// linearly (or logarithmically) in `[from, to]`, simulate to `t_end`, and
/// return the steady-state CSV in `*out_csv`.
///
/// # Safety
/// `doc` and `out_csv` must be valid; the names null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn crn_sweep_csv(
    doc: *const CrnDocument,
    input: *const c_char,
    output: *const c_char,
    from: f64,
    to: f64,
    points: usize,
    logarithmic: bool,
    t_end: f64,
    out_csv: *mut *mut c_char,
) -> CrnStatus {
    guard(|| {
        if doc.is_null() || out_csv.is_null() {
            set_error("null pointer argument");
            return CrnStatus::CrnNullPointer;
        }
        let doc = &unsafe { &*doc }.doc;
        let (input, output) = match (unsafe { opt_str(input) }, unsafe { opt_str(output) }) {
            (Ok(i), Ok(o)) => match resolve_io(doc, i, o) {
                Ok(pair) => pair,
                Err(status) => return status,
            },
            (Err(status), _) | (_, Err(status)) => return status,
        };
        if points == 0 || from >= to || !from.is_finite() || !to.is_finite() {
            set_error("sweep needs from < to and points >= 1");
            return CrnStatus::CrnUsageError;
        }
        if logarithmic && from <= 0.0 {
            set_error("logarithmic spacing needs a positive lower bound");
            return CrnStatus::CrnUsageError;
        }
        if t_end <= 0.0 || !t_end.is_finite() {
            set_error("t_end must be positive and finite");
            return CrnStatus::CrnUsageError;
        }
        let values: Vec<f64> = if points == 1 {
            vec![from]
        } else {
            (0..points)
                .map(|i| {
                    let s = i as f64 / (points - 1) as f64;
                    if logarithmic {
                        from * (to / from).powf(s)
                    } else {
                        from + (to - from) * s
                    }
                })
                .collect()
        };
        match sweep(
            &doc.network,
            input,
            &values,
            output,
            &SimConfig::with_t_end(t_end),
        ) {
            Ok(result) => give_string(sweep_csv(&result), out_csv),
            Err(e) => {
                set_error(e.to_string());
                CrnStatus::CrnNumericError
            }
        }
    })
}

/// Release a string returned by this API. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string returned by this API, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
