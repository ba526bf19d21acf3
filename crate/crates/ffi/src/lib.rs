//! C ABI over `tilelift`.
//!
//! Objects cross the boundary as opaque handles created by `tl_*_from_json`
//! or `tl_compile` and released with the matching `tl_*_free`. Every
//! fallible call returns a [`TlStatus`]; on failure the message is kept per
//! thread and read back with [`tl_last_error`]. Strings handed out by the
//! library are owned by the caller and released with [`tl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tilelift::compiler::{self, CompileOptions, CompiledSystem};
use tilelift::hierarchy::ZoomSchedule;
use tilelift::solver::{self, BoundaryConstraint, SolveOptions, SolveStatus};
use tilelift::{Error, SubshiftSpec, WangTileSet, Word};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    ResourceLimit = 4,
    Panic = 5,
}

/// Tiling verdicts written by [`tl_tile_region`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlSolve {
    Sat = 0,
    Unsat = 1,
    Limit = 2,
}

pub struct TlSpec(SubshiftSpec);

pub struct TlCompiled(CompiledSystem);

pub struct TlTileSet(WangTileSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(TlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ResourceLimit(_) | Error::FlattenBoundExceeded { .. } | Error::ScheduleTooLarge(_) => {
                TlStatus::ResourceLimit
            }
            _ => TlStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail(TlStatus::InvalidInput, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TlStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside tilelift");
            TlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(TlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(TlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(TlStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(TlStatus::NullPointer, format!("{what} is null")));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(TlStatus::InvalidInput, e.to_string()))?;
    put(out, c.into_raw(), "output string pointer")
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a subshift description such as `{"kind":"builtin","name":"golden_mean"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_spec_from_json(json: *const c_char, out: *mut *mut TlSpec) -> TlStatus {
    guard(|| {
        let spec = SubshiftSpec::from_json(text(json, "json")?)?;
        put(out, boxed(TlSpec(spec)), "out")
    })
}

/// # Safety
/// `spec` must be NULL or a handle from [`tl_spec_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tl_spec_free(spec: *mut TlSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Legal words of length `n` at budget `budget`, as a JSON array of bit
/// strings.
///
/// # Safety
/// `spec` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_oracle(
    spec: *const TlSpec,
    n: usize,
    budget: usize,
    out_json: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        let spec = handle(spec, "spec")?;
        let words = tilelift::subshift::legal_words(&spec.0, n, budget)?;
        put_string(out_json, serde_json::to_string(&words)?)
    })
}

/// Compile a subshift against a schedule given as JSON (`{"C":1}` or
/// `{"N":[...],"l":[...]}`) up to level `top`. A `flatten_bound` of zero
/// skips the flat tile set.
///
/// # Safety
/// `spec` must be a live handle, `schedule_json` a NUL-terminated string
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_compile(
    spec: *const TlSpec,
    schedule_json: *const c_char,
    top: usize,
    flatten_bound: u64,
    strict: bool,
    out: *mut *mut TlCompiled,
) -> TlStatus {
    guard(|| {
        let spec = handle(spec, "spec")?;
        let s: ZoomSchedule = serde_json::from_str(text(schedule_json, "schedule_json")?)?;
        let opts = CompileOptions {
            strict,
            flatten: (flatten_bound > 0).then_some(flatten_bound as u128),
        };
        let cs = compiler::compile(&spec.0, &s, top, opts)?;
        put(out, boxed(TlCompiled(cs)), "out")
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_compiled_from_json(json: *const c_char, out: *mut *mut TlCompiled) -> TlStatus {
    guard(|| {
        let cs = CompiledSystem::from_json(text(json, "json")?)?;
        put(out, boxed(TlCompiled(cs)), "out")
    })
}

/// # Safety
/// `cs` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_compiled_to_json(cs: *const TlCompiled, out_json: *mut *mut c_char) -> TlStatus {
    guard(|| put_string(out_json, handle(cs, "cs")?.0.to_json()))
}

/// The flat tile set of a compiled system, when one was built.
///
/// # Safety
/// `cs` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_compiled_flat_tiles(cs: *const TlCompiled, out: *mut *mut TlTileSet) -> TlStatus {
    guard(|| {
        let cs = handle(cs, "cs")?;
        let flat = cs.0.flat.as_ref().ok_or_else(|| {
            Fail(TlStatus::InvalidInput, "compiled without a flat tile set".into())
        })?;
        put(out, boxed(TlTileSet(flat.tiles.clone())), "out")
    })
}

/// # Safety
/// `cs` must be NULL or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tl_compiled_free(cs: *mut TlCompiled) {
    if !cs.is_null() {
        drop(Box::from_raw(cs));
    }
}

/// Completeness sweep at `width` and `budget`. The JSON report is written
/// to `out_report` when it is not NULL.
///
/// # Safety
/// `cs` must be a live handle; `out_passed` writable; `out_report` NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tl_verify_completeness(
    cs: *const TlCompiled,
    width: usize,
    budget: usize,
    out_passed: *mut bool,
    out_report: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        let r = compiler::verify_completeness(&handle(cs, "cs")?.0, width, budget)?;
        put(out_passed, r.passed(), "out_passed")?;
        if !out_report.is_null() {
            put_string(out_report, serde_json::to_string(&r)?)?;
        }
        Ok(())
    })
}

/// Soundness sweep over every ground word of `width` at patch height
/// `height`.
///
/// # Safety
/// As for [`tl_verify_completeness`].
#[no_mangle]
pub unsafe extern "C" fn tl_verify_soundness(
    cs: *const TlCompiled,
    width: usize,
    height: usize,
    budget: usize,
    out_passed: *mut bool,
    out_report: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        let r = compiler::verify_soundness(&handle(cs, "cs")?.0, width, height, budget)?;
        put(out_passed, r.passed(), "out_passed")?;
        if !out_report.is_null() {
            put_string(out_report, serde_json::to_string(&r)?)?;
        }
        Ok(())
    })
}

/// Whether some height-`height` patch projects onto the bit string `word`.
///
/// # Safety
/// `cs` must be a live handle, `word` a NUL-terminated string and
/// `out_extendable` writable.
#[no_mangle]
pub unsafe extern "C" fn tl_extendable(
    cs: *const TlCompiled,
    word: *const c_char,
    height: usize,
    out_extendable: *mut bool,
) -> TlStatus {
    guard(|| {
        let cs = handle(cs, "cs")?;
        let w: Word = text(word, "word")?.parse()?;
        put(out_extendable, compiler::extendable(&cs.0, &w, height)?, "out_extendable")
    })
}

/// Parse `{"colors":n,"tiles":[{"n":..,"e":..,"s":..,"w":..}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_tileset_from_json(json: *const c_char, out: *mut *mut TlTileSet) -> TlStatus {
    guard(|| {
        let set: WangTileSet = serde_json::from_str(text(json, "json")?)?;
        put(out, boxed(TlTileSet(set)), "out")
    })
}

/// Number of tiles, or zero for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tl_tileset_len(set: *const TlTileSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `set` must be NULL or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tl_tileset_free(set: *mut TlTileSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

unsafe fn boundary(json: *const c_char) -> Result<BoundaryConstraint, Fail> {
    if json.is_null() {
        Ok(BoundaryConstraint::none())
    } else {
        Ok(serde_json::from_str(text(json, "boundary_json")?)?)
    }
}

/// Decide tileability of a `width` x `height` region. `boundary_json` may
/// be NULL; `limit` of zero means no node limit. When `out_witness` is not
/// NULL and a tiling exists, it receives the tiling as patch JSON
/// (`{"w":..,"h":..,"cells":[..]}`), otherwise NULL.
///
/// # Safety
/// `set` must be a live handle, `boundary_json` NULL or NUL-terminated,
/// `out_verdict` writable, `out_witness` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tl_tile_region(
    set: *const TlTileSet,
    width: usize,
    height: usize,
    boundary_json: *const c_char,
    limit: u64,
    out_verdict: *mut TlSolve,
    out_witness: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        let set = handle(set, "set")?;
        let bc = boundary(boundary_json)?;
        let opts = SolveOptions {
            limit: (limit > 0).then_some(limit),
            count: 1,
        };
        let r = solver::tile_region(&set.0, width, height, &bc, opts)?;
        let verdict = match r.status {
            SolveStatus::Sat => TlSolve::Sat,
            SolveStatus::Unsat => TlSolve::Unsat,
            SolveStatus::Limit => TlSolve::Limit,
        };
        put(out_verdict, verdict, "out_verdict")?;
        if !out_witness.is_null() {
            match r.witness() {
                Some(p) => put_string(out_witness, serde_json::to_string(p)?)?,
                None => out_witness.write(ptr::null_mut()),
            }
        }
        Ok(())
    })
}

/// The region as DIMACS CNF text.
///
/// # Safety
/// As for [`tl_tile_region`]; `out_dimacs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_export_cnf(
    set: *const TlTileSet,
    width: usize,
    height: usize,
    boundary_json: *const c_char,
    out_dimacs: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        let set = handle(set, "set")?;
        let cnf = solver::export_cnf(&set.0, width, height, &boundary(boundary_json)?)?;
        put_string(out_dimacs, cnf.to_dimacs())
    })
}
