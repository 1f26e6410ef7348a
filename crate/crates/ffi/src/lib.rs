//! C ABI over `pq-core`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns a [`PqStatus`]; on failure the message is
//! available from [`pq_last_error`] on the same thread. Output pointers are
//! written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pq_core::cli::{self, Command, Job, Overrides};
use pq_core::integrator::QuadratureConfig;
use pq_core::io::{parse_json, path_from_json};
use pq_core::paths::SampledPath;
use pq_core::prequantum::{detect_periods, PeriodGroup, Prequantum};
use pq_core::spaces::SpaceModel;
use pq_core::PqError;

/// Result of every fallible call. Non-zero values leave a message for
/// [`pq_last_error`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Geometry = 4,
    InvalidConfig = 5,
    Parse = 6,
    Io = 7,
    Numeric = 8,
    Panic = 9,
}

/// Kind of a period group, as returned by [`pq_detect_periods`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqGroupKind {
    Zero = 0,
    Cyclic = 1,
    Generated = 2,
}

pub struct PqSpace(SpaceModel);
pub struct PqPath(SampledPath);
pub struct PqContext(Prequantum);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &PqError) -> PqStatus {
    use PqError::*;
    match e {
        InvalidSpace(_)
        | DimensionMismatch { .. }
        | NonFinite(_)
        | OffSphere(_)
        | SpaceMismatch
        | InvalidPath(_)
        | InvalidHomotopy(_)
        | InvalidGroup(_)
        | InvalidDiffeo(_)
        | InvalidGenerator(_)
        | TargetOutOfRange(_) => PqStatus::InvalidInput,
        AntipodalPoints
        | EndpointMismatch
        | EndsMismatch
        | AntipodalInterpolation
        | RowEndpointMismatch(_)
        | RowCountMismatch(..)
        | GroupMismatch
        | NotALoop
        | ContractionUnavailable(_)
        | NoPrimitive
        | ComposeMismatch => PqStatus::Geometry,
        BadEpsilon(_) | DegenerateGrid(_) | InsufficientPoints { .. } | InvalidConfig(_) | UnknownSuite(_) => {
            PqStatus::InvalidConfig
        }
        Parse(_) => PqStatus::Parse,
        Io(_) => PqStatus::Io,
        Numeric(_) => PqStatus::Numeric,
    }
}

enum Fail {
    Null,
    Utf8,
    Core(PqError),
}

impl From<PqError> for Fail {
    fn from(e: PqError) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, converting errors and panics into a status and recording the
/// message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PqStatus::Ok
        }
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            PqStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            PqStatus::InvalidUtf8
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            PqStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn out<T>(p: *mut T, v: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    p.write(v);
    Ok(())
}

unsafe fn string<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn slice<'a>(p: *const f64, n: usize) -> Result<&'a [f64], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null);
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn out_handle<T>(p: *mut *mut T, v: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    p.write(Box::into_raw(Box::new(v)));
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn pq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn pq_space_euclidean(n: usize, out_space: *mut *mut PqSpace) -> PqStatus {
    guard(|| out_handle(out_space, PqSpace(SpaceModel::euclidean(n)?)))
}

/// # Safety
/// As [`pq_space_euclidean`].
#[no_mangle]
pub unsafe extern "C" fn pq_space_sphere2(out_space: *mut *mut PqSpace) -> PqStatus {
    guard(|| out_handle(out_space, PqSpace(SpaceModel::sphere2())))
}

/// # Safety
/// As [`pq_space_euclidean`].
#[no_mangle]
pub unsafe extern "C" fn pq_space_cone(m: u32, out_space: *mut *mut PqSpace) -> PqStatus {
    guard(|| out_handle(out_space, PqSpace(SpaceModel::cone(m)?)))
}

/// Ambient coordinate count of points in the space.
///
/// # Safety
/// `space` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pq_space_dim(space: *const PqSpace, out_dim: *mut usize) -> PqStatus {
    guard(|| out(out_dim, deref(space)?.0.dim()))
}

/// # Safety
/// `space` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pq_space_free(space: *mut PqSpace) {
    free(space)
}

/// Path from `n_knots` strictly increasing times in `[0, 1]` (first 0, last
/// 1) and row-major coordinates of length `n_knots * dim`.
///
/// # Safety
/// `times` and `coords` must point to arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn pq_path_new(
    space: *const PqSpace,
    times: *const f64,
    coords: *const f64,
    n_knots: usize,
    out_path: *mut *mut PqPath,
) -> PqStatus {
    guard(|| {
        let s = deref(space)?.0;
        let t = slice(times, n_knots)?.to_vec();
        let c = slice(coords, n_knots.saturating_mul(s.dim()))?.to_vec();
        out_handle(out_path, PqPath(SampledPath::from_flat(s, t, c)?))
    })
}

/// Path from its JSON form (`{"space": …, "knots": [[t, [x…]], …]}`).
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pq_path_from_json(json: *const c_char, out_path: *mut *mut PqPath) -> PqStatus {
    guard(|| {
        let v = parse_json(string(json)?)?;
        out_handle(out_path, PqPath(path_from_json(&v)?))
    })
}

/// # Safety
/// `path` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pq_path_knot_count(path: *const PqPath, out_n: *mut usize) -> PqStatus {
    guard(|| out(out_n, deref(path)?.0.knot_count()))
}

/// # Safety
/// `path` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pq_path_free(path: *mut PqPath) {
    free(path)
}

/// Context with the exact period group of `space` and default quadrature.
///
/// # Safety
/// `space` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pq_context_new(space: *const PqSpace, out_ctx: *mut *mut PqContext) -> PqStatus {
    guard(|| out_handle(out_ctx, PqContext(Prequantum::pinned(deref(space)?.0))))
}

/// Replaces the quadrature settings; `tol_report` is the threshold used for
/// reported error-bound checks.
///
/// # Safety
/// `ctx` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pq_context_set_quadrature(
    ctx: *mut PqContext,
    refine: usize,
    rows: usize,
    tol_report: f64,
) -> PqStatus {
    guard(|| {
        let c = ctx.as_mut().ok_or(Fail::Null)?;
        let cfg = QuadratureConfig {
            refine,
            rows,
            tol_report,
        };
        cfg.validate()?;
        c.0.cfg = cfg;
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pq_context_free(ctx: *mut PqContext) {
    free(ctx)
}

/// Raw pairing over the linear homotopy from `a` to `b` and its phase.
/// Either output may be null.
///
/// # Safety
/// Handles must be live; outputs must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn pq_cocycle(
    ctx: *const PqContext,
    a: *const PqPath,
    b: *const PqPath,
    out_raw: *mut f64,
    out_phase: *mut f64,
) -> PqStatus {
    guard(|| {
        let pq = &deref(ctx)?.0;
        let raw = pq.cocycle_raw(&deref(a)?.0, &deref(b)?.0, None)?;
        let phase = pq.phase(raw)?.value();
        write_pair(out_raw, raw, out_phase, phase);
        Ok(())
    })
}

/// Pairing of a loop over its default contraction, and its phase.
///
/// # Safety
/// As [`pq_cocycle`].
#[no_mangle]
pub unsafe extern "C" fn pq_isotropy(
    ctx: *const PqContext,
    loop_path: *const PqPath,
    out_raw: *mut f64,
    out_phase: *mut f64,
) -> PqStatus {
    guard(|| {
        let pq = &deref(ctx)?.0;
        let raw = pq.isotropy_raw(&deref(loop_path)?.0, None)?;
        let phase = pq.phase(raw)?.value();
        write_pair(out_raw, raw, out_phase, phase);
        Ok(())
    })
}

/// Phase of the morphism class of `path` in the reference gauge.
///
/// # Safety
/// As [`pq_cocycle`].
#[no_mangle]
pub unsafe extern "C" fn pq_class_phase(ctx: *const PqContext, path: *const PqPath, out_phase: *mut f64) -> PqStatus {
    guard(|| {
        let m = deref(ctx)?.0.class_of_path(&deref(path)?.0)?;
        out(out_phase, m.phase.value())
    })
}

unsafe fn write_pair(a: *mut f64, x: f64, b: *mut f64, y: f64) {
    if !a.is_null() {
        a.write(x);
    }
    if !b.is_null() {
        b.write(y);
    }
}

/// Detects the period group by sweeping `s_steps × t_steps` cells. For a
/// cyclic group the generator is written to `out_generator`; otherwise 0.
///
/// # Safety
/// `space` must be live; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn pq_detect_periods(
    space: *const PqSpace,
    s_steps: usize,
    t_steps: usize,
    out_kind: *mut PqGroupKind,
    out_generator: *mut f64,
) -> PqStatus {
    guard(|| {
        let est = detect_periods(&deref(space)?.0, s_steps, t_steps, &QuadratureConfig::default())?;
        let (kind, a) = match est.group {
            PeriodGroup::Zero => (PqGroupKind::Zero, 0.0),
            PeriodGroup::Cyclic(a) => (PqGroupKind::Cyclic, a),
            PeriodGroup::Generated { .. } => (PqGroupKind::Generated, 0.0),
        };
        if out_generator.is_null() {
            return Err(Fail::Null);
        }
        out(out_kind, kind)?;
        out(out_generator, a)
    })
}

/// Runs a CLI command on an inline JSON job. Relative file inputs resolve
/// against `base_dir` (may be null for the current directory). The report
/// is written to `out_report` as a JSON string to release with
/// [`pq_string_free`], and `out_exit` receives the CLI exit code (0, or 1 if
/// a verify check failed).
///
/// # Safety
/// String arguments must be NUL-terminated; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn pq_run_job(
    command: *const c_char,
    job_json: *const c_char,
    base_dir: *const c_char,
    out_report: *mut *mut c_char,
    out_exit: *mut c_int,
) -> PqStatus {
    guard(|| {
        let cmd = Command::parse(string(command)?)?;
        let dir = if base_dir.is_null() { "." } else { string(base_dir)? };
        let job = Job::from_value(parse_json(string(job_json)?)?, Path::new(dir))?;
        let report = cli::run(cmd, &job, &Overrides::default())?;
        let text = CString::new(report.render(cli::Format::Json))
            .map_err(|_| PqError::Numeric("report contains NUL".into()))?;
        if out_report.is_null() || out_exit.is_null() {
            return Err(Fail::Null);
        }
        out(out_exit, report.exit_code())?;
        out(out_report, text.into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
