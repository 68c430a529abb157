//! C interface: build or parse a graph behind an opaque handle, compute its
//! distance sum, read the result as a string.
//!
//! Every function returns an [`IglStatus`]; on failure the message is kept
//! per thread and read with [`igl_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use igl_core::graph::io::{parse_graph, ParsedGraph};
use igl_core::graph::kernel_sum_brute;
use igl_core::planar::{igl_planar_with, PlanarOptions, PlaneGraph};
use igl_core::scalar::format_decimal;
use igl_core::treewidth::{igl_treewidth_with, min_fill, TreewidthOptions};
use igl_core::{DistanceKernel, IglError, Rational, Scalar};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IglStatus {
    Ok = 0,
    Null = 1,
    Parse = 2,
    Invariant = 3,
    InvalidArg = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IglAlgorithm {
    Brute = 0,
    Treewidth = 1,
    Planar = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IglKernel {
    Inverse = 0,
    Identity = 1,
    Square = 2,
    Iw2 = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct IglOptions {
    pub algorithm: IglAlgorithm,
    pub kernel: IglKernel,
    /// Exact rational arithmetic; the result is then `p/q`.
    pub exact: bool,
    /// Piece size for the planar pipeline; 0 picks the default.
    pub r: usize,
}

/// Opaque graph handle.
pub struct IglGraph {
    inner: ParsedGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: IglStatus, msg: impl Into<String>) -> IglStatus {
    set_error(msg.into());
    status
}

fn from_error(e: &IglError) -> IglStatus {
    let status = match e.exit_code() {
        2 => match e {
            IglError::InvalidInput(_) => IglStatus::InvalidArg,
            _ => IglStatus::Parse,
        },
        _ => IglStatus::Invariant,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> IglStatus) -> IglStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(IglStatus::Panic, "internal panic"))
}

/// Empty graph on `n` vertices. Free with [`igl_graph_free`].
#[no_mangle]
pub extern "C" fn igl_graph_new(n: usize) -> *mut IglGraph {
    Box::into_raw(Box::new(IglGraph { inner: ParsedGraph { n, edges: Vec::new(), rotation: None } }))
}

/// Parses edge-list text (with optional rotation lines) into `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn igl_graph_parse(text: *const c_char, out: *mut *mut IglGraph) -> IglStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(IglStatus::Null, "null argument");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(IglStatus::Parse, "input is not UTF-8");
        };
        match parse_graph(s) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IglGraph { inner }));
                IglStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Adds edge `u–v` of length `num/den`; its id is the number of edges added
/// before it.
///
/// # Safety
/// `g` must come from this library and not be freed.
#[no_mangle]
pub unsafe extern "C" fn igl_graph_add_edge(g: *mut IglGraph, u: usize, v: usize, num: i64, den: i64) -> IglStatus {
    guard(|| {
        let Some(g) = g.as_mut() else {
            return fail(IglStatus::Null, "null graph");
        };
        let n = g.inner.n;
        if u >= n || v >= n || u == v {
            return fail(IglStatus::InvalidArg, format!("bad edge {u}-{v} for n = {n}"));
        }
        if num <= 0 || den <= 0 {
            return fail(IglStatus::InvalidArg, format!("edge length {num}/{den} is not positive"));
        }
        g.inner.edges.push((u, v, Rational::from_ratio(num, den)));
        IglStatus::Ok
    })
}

/// Sets the clockwise edge order around `v`. Needed by the planar pipeline.
///
/// # Safety
/// `g` must come from this library; `edges` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn igl_graph_set_rotation(
    g: *mut IglGraph,
    v: usize,
    edges: *const usize,
    len: usize,
) -> IglStatus {
    guard(|| {
        let Some(g) = g.as_mut() else {
            return fail(IglStatus::Null, "null graph");
        };
        if edges.is_null() && len > 0 {
            return fail(IglStatus::Null, "null edge list");
        }
        let n = g.inner.n;
        if v >= n {
            return fail(IglStatus::InvalidArg, format!("vertex {v} out of range"));
        }
        let list = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(edges, len).to_vec() };
        if let Some(&e) = list.iter().find(|&&e| e >= g.inner.edges.len()) {
            return fail(IglStatus::InvalidArg, format!("edge {e} out of range"));
        }
        g.inner.rotation.get_or_insert_with(|| vec![Vec::new(); n])[v] = list;
        IglStatus::Ok
    })
}

fn compute<T: Scalar>(p: &ParsedGraph, opts: &IglOptions, conv: impl Fn(&Rational) -> T) -> Result<T, IglError> {
    let kernel = match opts.kernel {
        IglKernel::Inverse => DistanceKernel::Inverse,
        IglKernel::Identity => DistanceKernel::Identity,
        IglKernel::Square => DistanceKernel::Square,
        IglKernel::Iw2 => DistanceKernel::InverseSquareWeighted,
    };
    let g = p.graph()?;
    match opts.algorithm {
        IglAlgorithm::Brute => Ok(kernel_sum_brute(&g.map_weights(conv), kernel)),
        IglAlgorithm::Treewidth => {
            let td = min_fill(&g);
            let tw = TreewidthOptions { kernel, parallel: false, ..Default::default() };
            Ok(igl_treewidth_with(&g.map_weights(conv), &td, &tw)?.value)
        }
        IglAlgorithm::Planar => {
            let pg = PlaneGraph::from_parsed(p)?.map_weights(conv);
            let po = PlanarOptions { kernel, r: (opts.r > 0).then_some(opts.r), audit: false, parallel: false };
            Ok(igl_planar_with(&pg, &po)?.value)
        }
    }
}

/// Computes the distance sum and stores it in `*out` as `p/q` (exact) or a
/// 15-digit decimal. Free the string with [`igl_string_free`].
///
/// # Safety
/// `g` and `opts` must be valid; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn igl_compute(g: *const IglGraph, opts: *const IglOptions, out: *mut *mut c_char) -> IglStatus {
    guard(|| {
        let (Some(g), Some(opts)) = (g.as_ref(), opts.as_ref()) else {
            return fail(IglStatus::Null, "null argument");
        };
        if out.is_null() {
            return fail(IglStatus::Null, "null output");
        }
        let text = if opts.exact {
            compute(&g.inner, opts, |w| w.clone()).map(|v| v.to_fraction().unwrap_or_default())
        } else {
            compute(&g.inner, opts, |w| w.to_f64()).map(|v| format_decimal(v, 15))
        };
        match text {
            Ok(s) => {
                *out = CString::new(s).expect("no NUL in numbers").into_raw();
                IglStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `s` must come from [`igl_compute`] or be null.
#[no_mangle]
pub unsafe extern "C" fn igl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `g` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn igl_graph_free(g: *mut IglGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn igl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
