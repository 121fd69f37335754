//! C interface to `mdg_reconstruct`.
//!
//! Codes and graphs are opaque heap handles released with
//! [`mdg_code_free`] and [`mdg_graph_free`]. Every fallible function returns
//! an [`MdgStatus`]; on failure [`mdg_last_error`] describes the cause.
//! Vertex and word indices are 0-based, words are packed into `uint64_t`
//! with coordinate `i` at bit `i - 1`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mdg_reconstruct::codefile::{format_code, parse_code};
use mdg_reconstruct::equivalence::{find_equivalence, EquivOptions, Status};
use mdg_reconstruct::generators::{gen_extended, gen_family, Family};
use mdg_reconstruct::graph::{format_dimacs, parse_dimacs, shuffle};
use mdg_reconstruct::reconstruct::{reconstruct_extended, reconstruct_perfect};
use mdg_reconstruct::word::{extend_parity, validate_extended_perfect, validate_perfect};
use mdg_reconstruct::{build_mdg, Code, Error, MdGraph};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdgStatus {
    Ok = 0,
    /// A well-formed negative answer: inequivalent codes, invalid code.
    Negative = 1,
    /// Search budget exhausted.
    Undecided = 2,
    InvalidGraph = 3,
    Format = 4,
    Io = 5,
    InvalidArgument = 6,
    NullPointer = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

/// Code family for [`mdg_code_generate`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdgFamily {
    Hamming = 0,
    Vasilev = 1,
}

/// Opaque code handle.
pub struct MdgCode(Code);

/// Opaque graph handle.
pub struct MdgGraph(MdGraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MdgStatus {
    match e {
        Error::InvalidGraph(_) => MdgStatus::InvalidGraph,
        Error::Format { .. } | Error::DuplicateWord(_) => MdgStatus::Format,
        Error::Io(_) => MdgStatus::Io,
        Error::NotAutomorphism(_) => MdgStatus::Negative,
        _ => MdgStatus::InvalidArgument,
    }
}

struct Fail(MdgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MdgStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<MdgStatus, Fail>) -> MdgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            MdgStatus::Internal
        }
    }
}

unsafe fn code_ref<'a>(p: *const MdgCode) -> Result<&'a Code, Fail> {
    p.as_ref().map(|c| &c.0).ok_or_else(|| null("code handle"))
}

unsafe fn graph_ref<'a>(p: *const MdgGraph) -> Result<&'a MdGraph, Fail> {
    p.as_ref().map(|g| &g.0).ok_or_else(|| null("graph handle"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MdgStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn boxed_code(c: Code) -> *mut MdgCode {
    Box::into_raw(Box::new(MdgCode(c)))
}

fn boxed_graph(g: MdGraph) -> *mut MdgGraph {
    Box::into_raw(Box::new(MdgGraph(g)))
}

fn owned_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(MdgStatus::Internal, "text contains nul".into()))
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn mdg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from a `*_format` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mdg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Generates a Hamming or Vasil'ev code of length `2^m - 1`, or its
/// extension. `has_seed = false` gives the linear Vasil'ev code.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_code_generate(
    family: MdgFamily,
    m: u32,
    has_seed: bool,
    seed: u64,
    extended: bool,
    out: *mut *mut MdgCode,
) -> MdgStatus {
    guard(|| {
        let fam = match family {
            MdgFamily::Hamming => Family::Hamming { m },
            MdgFamily::Vasilev => Family::Vasilev {
                m,
                seed: has_seed.then_some(seed),
            },
        };
        let code = if extended { gen_extended(fam)? } else { gen_family(fam)? };
        put(out, boxed_code(code))?;
        Ok(MdgStatus::Ok)
    })
}

/// Parses a code file's contents.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_code_parse(text: *const c_char, out: *mut *mut MdgCode) -> MdgStatus {
    guard(|| {
        let code = parse_code(str_arg(text, "text")?)?;
        put(out, boxed_code(code))?;
        Ok(MdgStatus::Ok)
    })
}

/// Serializes a code; free the result with [`mdg_string_free`].
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_code_format(code: *const MdgCode, out: *mut *mut c_char) -> MdgStatus {
    guard(|| {
        let s = owned_string(format_code(code_ref(code)?))?;
        put(out, s)?;
        Ok(MdgStatus::Ok)
    })
}

/// Number of words.
///
/// # Safety
/// `code` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn mdg_code_size(code: *const MdgCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.len())
}

/// Word length.
///
/// # Safety
/// `code` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn mdg_code_length(code: *const MdgCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.length())
}

/// Word `index` in insertion order.
///
/// # Safety
/// `code` must be a live handle and `bits` writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_code_word(code: *const MdgCode, index: usize, bits: *mut u64) -> MdgStatus {
    guard(|| {
        let c = code_ref(code)?;
        if index >= c.len() {
            return Err(Fail(MdgStatus::InvalidArgument, format!("word {index} out of range")));
        }
        put(bits, c.word(index).bits())?;
        Ok(MdgStatus::Ok)
    })
}

/// Parity extension.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_code_extend(code: *const MdgCode, out: *mut *mut MdgCode) -> MdgStatus {
    guard(|| {
        let e = extend_parity(code_ref(code)?)?;
        put(out, boxed_code(e))?;
        Ok(MdgStatus::Ok)
    })
}

/// `Ok` if the code is 1-perfect (`extended = false`) or extended 1-perfect,
/// `Negative` otherwise.
///
/// # Safety
/// `code` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mdg_code_validate(code: *const MdgCode, extended: bool) -> MdgStatus {
    guard(|| {
        let c = code_ref(code)?;
        let v = if extended { validate_extended_perfect(c) } else { validate_perfect(c) };
        if v.ok {
            Ok(MdgStatus::Ok)
        } else {
            Err(Fail(MdgStatus::Negative, v.reason.unwrap_or_default()))
        }
    })
}

/// # Safety
/// `code` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn mdg_code_free(code: *mut MdgCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Minimum distance graph; vertex `i` is word `i`.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_graph_build(code: *const MdgCode, out: *mut *mut MdgGraph) -> MdgStatus {
    guard(|| {
        let g = build_mdg(code_ref(code)?)?;
        put(out, boxed_graph(g))?;
        Ok(MdgStatus::Ok)
    })
}

/// Relabels vertices by a seeded random permutation. If `perm` is not null
/// it receives `vcount` entries, `perm[old] = new`.
///
/// # Safety
/// `graph` must be a live handle, `out` writable, `perm` null or writable
/// for `vcount` entries.
#[no_mangle]
pub unsafe extern "C" fn mdg_graph_shuffle(
    graph: *const MdgGraph,
    seed: u64,
    out: *mut *mut MdgGraph,
    perm: *mut usize,
) -> MdgStatus {
    guard(|| {
        let (h, p) = shuffle(graph_ref(graph)?, seed);
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if !perm.is_null() {
            ptr::copy_nonoverlapping(p.as_ptr(), perm, p.len());
        }
        put(out, boxed_graph(h))?;
        Ok(MdgStatus::Ok)
    })
}

/// Parses DIMACS text.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_graph_parse(text: *const c_char, out: *mut *mut MdgGraph) -> MdgStatus {
    guard(|| {
        let g = parse_dimacs(str_arg(text, "text")?)?;
        put(out, boxed_graph(g))?;
        Ok(MdgStatus::Ok)
    })
}

/// DIMACS text; free the result with [`mdg_string_free`].
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_graph_format(graph: *const MdgGraph, out: *mut *mut c_char) -> MdgStatus {
    guard(|| {
        let s = owned_string(format_dimacs(graph_ref(graph)?))?;
        put(out, s)?;
        Ok(MdgStatus::Ok)
    })
}

/// # Safety
/// `graph` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn mdg_graph_vertex_count(graph: *const MdgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.vcount())
}

/// # Safety
/// `graph` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn mdg_graph_edge_count(graph: *const MdgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// False for out-of-range vertices or a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mdg_graph_has_edge(graph: *const MdgGraph, u: usize, v: usize) -> bool {
    graph
        .as_ref()
        .is_some_and(|g| u < g.0.vcount() && v < g.0.vcount() && g.0.has_edge(u, v))
}

/// # Safety
/// `graph` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn mdg_graph_free(graph: *mut MdgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Reconstructs a code from its MDG with `base` labelled zero; word `v` of
/// the result belongs to vertex `v`. `perfect` selects a 1-perfect input
/// graph instead of an extended one.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_reconstruct(
    graph: *const MdgGraph,
    base: usize,
    perfect: bool,
    out: *mut *mut MdgCode,
) -> MdgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let code = if perfect {
            reconstruct_perfect(g, base)?.code
        } else {
            reconstruct_extended(g, base)?.code
        };
        put(out, boxed_code(code))?;
        Ok(MdgStatus::Ok)
    })
}

/// Decides equivalence: `Ok` (equivalent), `Negative` or `Undecided`.
/// When equivalent and the buffers are not null, `perm` receives the
/// 1-based coordinate images and `trans` the translation of the witness
/// `x -> trans + perm(x)` mapping `a` onto `b`. `budget = 0` uses the
/// default search limit.
///
/// # Safety
/// `a`, `b` must be live handles; `perm` null or writable for `length`
/// entries; `trans` null or writable.
#[no_mangle]
pub unsafe extern "C" fn mdg_equivalence(
    a: *const MdgCode,
    b: *const MdgCode,
    budget: u64,
    perm: *mut usize,
    trans: *mut u64,
) -> MdgStatus {
    guard(|| {
        let mut opts = EquivOptions::default();
        if budget > 0 {
            opts.budget = budget;
        }
        let r = find_equivalence(code_ref(a)?, code_ref(b)?, &opts)?;
        match (r.status, r.witness) {
            (Status::Equivalent, Some(w)) => {
                if !perm.is_null() {
                    ptr::copy_nonoverlapping(w.perm().as_ptr(), perm, w.length());
                }
                if !trans.is_null() {
                    trans.write(w.trans().bits());
                }
                Ok(MdgStatus::Ok)
            }
            (Status::Undecided, _) => Err(Fail(MdgStatus::Undecided, "search budget exhausted".into())),
            _ => Err(Fail(
                MdgStatus::Negative,
                r.certificate.reason.unwrap_or_else(|| "inequivalent".into()),
            )),
        }
    })
}
