//! C ABI over cantor-forge. Objects cross the boundary as opaque handles that the caller
//! frees with the matching `*_free`. Every fallible call returns a `CfStatus`; on failure
//! `cf_last_error` holds a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cantor_forge::csp::equivalence_suite;
use cantor_forge::fractal::{gen_f, gen_integer_grid, gen_sierpinski_carpet, CrossbarParams};
use cantor_forge::geometry::rational::Rational;
use cantor_forge::geometry::PointSet;
use cantor_forge::spanner::{build_carpet_spanner, build_greedy_spanner, verify_spanner, SpannerGraph};
use cantor_forge::tsp::{
    check_structure, reduce_exact_cover_to_tsp, witness_path_from_cover, ExactCoverInstance, TspReductionOutput,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    VerificationFailed = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Opaque point set.
pub struct CfPointSet(PointSet);
/// Opaque spanner graph.
pub struct CfSpanner(SpannerGraph);
/// Opaque compiled Exact Cover → TSP instance.
pub struct CfTspInstance(TspReductionOutput);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(status: CfStatus, msg: impl Into<String>) -> CfStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> CfStatus) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CfStatus::Panic, "internal panic"),
    }
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> CfStatus {
    *out = Box::into_raw(Box::new(v));
    CfStatus::Ok
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, CfStatus> {
    if s.is_null() {
        return Err(fail(CfStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CfStatus::InvalidArgument, "string is not UTF-8"))
}

fn rational(num: i64, den: i64) -> Result<Rational, CfStatus> {
    if den == 0 {
        return Err(fail(CfStatus::InvalidArgument, "zero denominator"));
    }
    Ok(Rational::new(num.into(), den.into()))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(CfStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message of the last failure on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from a `*_to_json` call and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> CfStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CfStatus::Ok
        }
        Err(_) => fail(CfStatus::InvalidArgument, "output contains a NUL byte"),
    }
}

/// f^{l,v,d}(k).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cf_pointset_crossbar(l: u32, v: u32, d: u32, k: u32, out: *mut *mut CfPointSet) -> CfStatus {
    non_null!(out);
    guard(|| {
        let p =
            try_status!(CrossbarParams::new(l, v, d, k).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        let f = try_status!(gen_f(&p).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        put(out, CfPointSet(f))
    })
}

/// Discrete Sierpiński carpet of depth k.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cf_pointset_carpet(k: u32, box_points: bool, out: *mut *mut CfPointSet) -> CfStatus {
    non_null!(out);
    guard(|| {
        let c = try_status!(
            gen_sierpinski_carpet(k, box_points).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string()))
        );
        put(out, CfPointSet(c))
    })
}

/// {0..n-1}^d as generated by the library.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cf_pointset_grid(n: u32, d: u32, out: *mut *mut CfPointSet) -> CfStatus {
    non_null!(out);
    guard(|| {
        let g = try_status!(gen_integer_grid(n, d).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        put(out, CfPointSet(g))
    })
}

/// Parses point-set JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_pointset_from_json(json: *const c_char, out: *mut *mut CfPointSet) -> CfStatus {
    non_null!(out);
    guard(|| {
        let s = try_status!(str_arg(json));
        let p: PointSet =
            try_status!(serde_json::from_str(s).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        put(out, CfPointSet(p))
    })
}

/// # Safety
/// `p` must be a live handle; `len` and `dim` writable (either may be NULL).
#[no_mangle]
pub unsafe extern "C" fn cf_pointset_shape(p: *const CfPointSet, len: *mut usize, dim: *mut usize) -> CfStatus {
    non_null!(p);
    if !len.is_null() {
        *len = (*p).0.len();
    }
    if !dim.is_null() {
        *dim = (*p).0.dim();
    }
    CfStatus::Ok
}

/// Writes len·dim coordinates, row-major, rounded to double.
///
/// # Safety
/// `buf` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn cf_pointset_coords(p: *const CfPointSet, buf: *mut f64, cap: usize) -> CfStatus {
    non_null!(p, buf);
    let ps = &(*p).0;
    let need = ps.len() * ps.dim();
    if cap < need {
        return fail(CfStatus::BufferTooSmall, format!("need {need} doubles, got {cap}"));
    }
    let out = std::slice::from_raw_parts_mut(buf, need);
    for (i, q) in ps.points().iter().enumerate() {
        out[i * ps.dim()..(i + 1) * ps.dim()].copy_from_slice(&q.to_f64());
    }
    CfStatus::Ok
}

/// Exact JSON. Free the result with `cf_string_free`.
///
/// # Safety
/// `p` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_pointset_to_json(p: *const CfPointSet, out: *mut *mut c_char) -> CfStatus {
    non_null!(p, out);
    guard(|| put_string(out, (*p).0.to_json()))
}

/// # Safety
/// `p` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_pointset_free(p: *mut CfPointSet) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Greedy spanner with stretch c = c_num / c_den.
///
/// # Safety
/// `p` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_spanner_greedy(
    p: *const CfPointSet,
    c_num: i64,
    c_den: i64,
    out: *mut *mut CfSpanner,
) -> CfStatus {
    non_null!(p, out);
    guard(|| {
        let c = try_status!(rational(c_num, c_den));
        let g =
            try_status!(build_greedy_spanner(&(*p).0, &c).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        put(out, CfSpanner(g))
    })
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_spanner_carpet(k: u32, out: *mut *mut CfSpanner) -> CfStatus {
    non_null!(out);
    guard(|| {
        let g = try_status!(build_carpet_spanner(k).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        put(out, CfSpanner(g))
    })
}

/// # Safety
/// `g` live; `vertices`, `edges` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn cf_spanner_shape(g: *const CfSpanner, vertices: *mut usize, edges: *mut usize) -> CfStatus {
    non_null!(g);
    if !vertices.is_null() {
        *vertices = (*g).0.len();
    }
    if !edges.is_null() {
        *edges = (*g).0.edges().len();
    }
    CfStatus::Ok
}

/// Checks stretch ≤ c_num / c_den. Returns `VerificationFailed` when it does not hold;
/// `max_stretch` gets the measured value (infinity if disconnected) either way.
///
/// # Safety
/// `g` live, `max_stretch` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn cf_spanner_verify(
    g: *const CfSpanner,
    c_num: i64,
    c_den: i64,
    max_stretch: *mut f64,
) -> CfStatus {
    non_null!(g);
    guard(|| {
        let c = try_status!(rational(c_num, c_den));
        let r = try_status!(verify_spanner(&(*g).0, &c).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        if !max_stretch.is_null() {
            *max_stretch = r.max_stretch.unwrap_or(f64::INFINITY);
        }
        if r.ok {
            CfStatus::Ok
        } else {
            fail(CfStatus::VerificationFailed, format!("stretch exceeds {c}"))
        }
    })
}

/// # Safety
/// `g` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_spanner_to_json(g: *const CfSpanner, out: *mut *mut c_char) -> CfStatus {
    non_null!(g, out);
    guard(|| put_string(out, (*g).0.to_json()))
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_spanner_free(g: *mut CfSpanner) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Compiles `{"m": .., "sets": [[..], ..]}` and runs the structural checks.
///
/// # Safety
/// `xc_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_tsp_reduce(
    xc_json: *const c_char,
    l: u32,
    v: u32,
    out: *mut *mut CfTspInstance,
) -> CfStatus {
    non_null!(out);
    guard(|| {
        let s = try_status!(str_arg(xc_json));
        let raw: ExactCoverInstance =
            try_status!(serde_json::from_str(s).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        let xc = try_status!(
            ExactCoverInstance::new(raw.m, raw.sets).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string()))
        );
        let t = try_status!(
            reduce_exact_cover_to_tsp(&xc, l, v).map_err(|e| fail(CfStatus::VerificationFailed, e.to_string()))
        );
        put(out, CfTspInstance(t))
    })
}

/// # Safety
/// `t` live; outputs writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn cf_tsp_summary(
    t: *const CfTspInstance,
    points: *mut usize,
    components: *mut usize,
    alpha: *mut f64,
) -> CfStatus {
    non_null!(t);
    let o = &(*t).0;
    if !points.is_null() {
        *points = o.points.len();
    }
    if !components.is_null() {
        *components = o.alpha.n;
    }
    if !alpha.is_null() {
        *alpha = o.alpha.total;
    }
    CfStatus::Ok
}

/// Re-runs the structural checks.
///
/// # Safety
/// `t` live.
#[no_mangle]
pub unsafe extern "C" fn cf_tsp_check(t: *const CfTspInstance) -> CfStatus {
    non_null!(t);
    guard(|| match check_structure(&(*t).0) {
        Ok(r) if r.ok() => CfStatus::Ok,
        Ok(r) => fail(CfStatus::VerificationFailed, format!("{:?}", r.failures)),
        Err(e) => fail(CfStatus::InvalidArgument, e.to_string()),
    })
}

/// Witness path length for the cover given as `count` set indices.
///
/// # Safety
/// `t` live, `cover` holds `count` entries (may be NULL when `count` is 0), `length` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_tsp_witness_length(
    t: *const CfTspInstance,
    cover: *const usize,
    count: usize,
    length: *mut f64,
) -> CfStatus {
    non_null!(t, length);
    if cover.is_null() && count > 0 {
        return fail(CfStatus::NullPointer, "cover is null");
    }
    guard(|| {
        let c: &[usize] = if count == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(cover, count)
        };
        let w = try_status!(
            witness_path_from_cover(&(*t).0, c).map_err(|e| fail(CfStatus::InvalidArgument, e.to_string()))
        );
        *length = w.length;
        CfStatus::Ok
    })
}

/// # Safety
/// `t` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_tsp_to_json(t: *const CfTspInstance, out: *mut *mut c_char) -> CfStatus {
    non_null!(t, out);
    guard(|| put_string(out, (*t).0.to_json()))
}

/// # Safety
/// `t` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_tsp_free(t: *mut CfTspInstance) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Runs `count` seeded ≤-CSP instances (d = 2) through the ball compiler and the oracles.
/// `agreed` gets the number of instances on which all three answers match.
///
/// # Safety
/// `agreed` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_csp_equivalence(
    seed: u64,
    count: usize,
    n_max: u32,
    delta_max: u32,
    budget: u64,
    agreed: *mut usize,
) -> CfStatus {
    non_null!(agreed);
    guard(|| {
        let s = try_status!(equivalence_suite(seed, count, 2, n_max, delta_max, 3, 1, budget)
            .map_err(|e| fail(CfStatus::InvalidArgument, e.to_string())));
        *agreed = s.agreed;
        if s.agreed == s.count {
            CfStatus::Ok
        } else {
            fail(
                CfStatus::VerificationFailed,
                format!("{}/{} equivalent", s.agreed, s.count),
            )
        }
    })
}
