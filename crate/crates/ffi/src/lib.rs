//! C ABI over `overlap_forge`.
//!
//! Every fallible function returns an [`OfStatus`]. On failure a message is
//! kept per thread and can be read with [`of_last_error_message`]. Objects
//! cross the boundary as opaque handles that must be released with the
//! matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use overlap_forge::combinatorics::count_spanning_trees;
use overlap_forge::io::{certificate_json, parse_graph, IoError, LoadedGraph};
use overlap_forge::pipeline::{realize_with_overlap, OverlapCertificate, PipelineConfig, Route};
use overlap_forge::unfolding::{critical_omega, CRITICAL_OMEGA_TOL, EPS_AREA_REL};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    PipelineError = 5,
    Overflow = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OfRoute {
    Disjoint = 0,
    SharedVertex = 1,
    Tetrahedron = 2,
}

impl From<Route> for OfRoute {
    fn from(r: Route) -> Self {
        match r {
            Route::Disjoint => OfRoute::Disjoint,
            Route::SharedVertex => OfRoute::SharedVertex,
            Route::Tetrahedron => OfRoute::Tetrahedron,
        }
    }
}

/// Pipeline knobs. Angles in degrees.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfPipelineOptions {
    pub omega_target_deg: f64,
    pub max_iters: u32,
    pub eps: f64,
    pub has_seed: bool,
    pub seed: u64,
}

/// A validated graph, with coordinates when the document carried them.
pub struct OfGraph(LoadedGraph);

pub struct OfCertificate(OverlapCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn guard(f: impl FnOnce() -> Result<(), (OfStatus, String)>) -> OfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OfStatus::Panic
        }
    }
}

fn null(what: &str) -> (OfStatus, String) {
    (OfStatus::NullPointer, format!("{what} is null"))
}

/// Message for the last failed call on this thread, or null after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn of_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated crate version.
#[no_mangle]
pub extern "C" fn of_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn of_pipeline_options_default() -> OfPipelineOptions {
    let d = PipelineConfig::default();
    OfPipelineOptions { omega_target_deg: d.omega_target.to_degrees(), max_iters: d.max_iters, eps: EPS_AREA_REL, has_seed: false, seed: 0 }
}

/// Parse a graph document from NUL-terminated JSON.
///
/// # Safety
/// `json` must be null or a valid NUL-terminated string; `out` must be null
/// or point to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn of_graph_from_json(json: *const c_char, out: *mut *mut OfGraph) -> OfStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (OfStatus::InvalidUtf8, e.to_string()))?;
        let g = parse_graph(text).map_err(|e| match e {
            IoError::Parse { .. } => (OfStatus::ParseError, e.to_string()),
            _ => (OfStatus::ValidationError, e.to_string()),
        })?;
        *out = Box::into_raw(Box::new(OfGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from [`of_graph_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn of_graph_free(g: *mut OfGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex, edge and face counts. Any output pointer may be null.
///
/// # Safety
/// `g` must be a live graph handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_graph_counts(g: *const OfGraph, vertices: *mut usize, edges: *mut usize, faces: *mut usize) -> OfStatus {
    guard(|| {
        let g = &g.as_ref().ok_or_else(|| null("graph"))?.0.graph;
        for (p, v) in [(vertices, g.vertex_count()), (edges, g.edge_count()), (faces, g.face_count())] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Whether the document carried coordinates.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn of_graph_has_solid(g: *const OfGraph) -> bool {
    g.as_ref().is_some_and(|g| g.0.solid.is_some())
}

/// Number of spanning trees; `Overflow` when it exceeds 64 bits.
///
/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_graph_count_spanning_trees(g: *const OfGraph, out: *mut u64) -> OfStatus {
    guard(|| {
        let g = &g.as_ref().ok_or_else(|| null("graph"))?.0.graph;
        if out.is_null() {
            return Err(null("out"));
        }
        let n = count_spanning_trees(g).map_err(|e| (OfStatus::ValidationError, e.to_string()))?;
        *out = u64::try_from(n).map_err(|_| (OfStatus::Overflow, format!("{n} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// Run the full construction. `options` may be null for defaults.
///
/// # Safety
/// `g` must be a live graph handle, `options` null or readable, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn of_pipeline_run(g: *const OfGraph, options: *const OfPipelineOptions, out: *mut *mut OfCertificate) -> OfStatus {
    guard(|| {
        let g = &g.as_ref().ok_or_else(|| null("graph"))?.0.graph;
        if out.is_null() {
            return Err(null("out"));
        }
        let o = options.as_ref().copied().unwrap_or_else(|| of_pipeline_options_default());
        let cfg = PipelineConfig {
            omega_target: o.omega_target_deg.to_radians(),
            max_iters: o.max_iters,
            eps: o.eps,
            seed: o.has_seed.then_some(o.seed),
            ..PipelineConfig::default()
        };
        let cert = realize_with_overlap(g, &cfg).map_err(|e| (OfStatus::PipelineError, e.to_string()))?;
        *out = Box::into_raw(Box::new(OfCertificate(cert)));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from [`of_pipeline_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn of_certificate_free(c: *mut OfCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live certificate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_certificate_route(c: *const OfCertificate, out: *mut OfRoute) -> OfStatus {
    guard(|| {
        let c = &c.as_ref().ok_or_else(|| null("certificate"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c.route.into();
        Ok(())
    })
}

/// Area of the largest overlap witness.
///
/// # Safety
/// `c` must be a live certificate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_certificate_overlap_area(c: *const OfCertificate, out: *mut f64) -> OfStatus {
    guard(|| {
        let c = &c.as_ref().ok_or_else(|| null("certificate"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c.overlap.witnesses.first().map_or(0.0, |w| w.area);
        Ok(())
    })
}

/// Re-unfold the stored solid and report whether it still overlaps.
///
/// # Safety
/// `c` must be a live certificate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_certificate_replay(c: *const OfCertificate, out: *mut bool) -> OfStatus {
    guard(|| {
        let c = &c.as_ref().ok_or_else(|| null("certificate"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c.replay().map_err(|e| (OfStatus::PipelineError, e.to_string()))?.overlapping;
        Ok(())
    })
}

/// Serialized certificate; release with [`of_string_free`].
///
/// # Safety
/// `c` must be a live certificate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn of_certificate_to_json(c: *const OfCertificate, out: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let c = &c.as_ref().ok_or_else(|| null("certificate"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = certificate_json(c).map_err(|e| (OfStatus::PipelineError, e.to_string()))?;
        *out = CString::new(text).expect("json has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn of_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Equal curvature at which the zig-zag banks stop overlapping. Degrees in
/// and out.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_critical_omega(alpha_deg: f64, len12: f64, len23: f64, out: *mut f64) -> OfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let w = critical_omega(alpha_deg.to_radians(), len12, len23, CRITICAL_OMEGA_TOL)
            .map_err(|e| (OfStatus::ValidationError, e.to_string()))?;
        *out = w.to_degrees();
        Ok(())
    })
}
