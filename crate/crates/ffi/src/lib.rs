//! C ABI over the `tambarize` job runner.
//!
//! Handles are opaque and owned by the caller: every `*_new` has a matching `*_free`. Functions
//! return a [`TzStatus`]; on anything but `TZ_OK` or `TZ_VIOLATIONS` a message is available from
//! [`tz_last_error`] on the same thread. See `include/tambarize.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tambarize::cli::{run, Command, Format, JobError, JobOutput, JobSpec};
use tambarize::group::{Group, GroupSpec};

pub type TzStatus = i32;

pub const TZ_OK: TzStatus = 0;
/// The job ran and found axiom violations.
pub const TZ_VIOLATIONS: TzStatus = 1;
pub const TZ_MALFORMED: TzStatus = 2;
pub const TZ_FAILED: TzStatus = 3;
pub const TZ_NULL_POINTER: TzStatus = 4;
pub const TZ_INVALID_UTF8: TzStatus = 5;
pub const TZ_PANIC: TzStatus = 6;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<TzStatus, (TzStatus, String)>) -> TzStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TZ_PANIC
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TzStatus, String)> {
    if p.is_null() {
        return Err((TZ_NULL_POINTER, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (TZ_INVALID_UTF8, format!("{what} is not UTF-8")))
}

fn null_arg(what: &str) -> (TzStatus, String) {
    (TZ_NULL_POINTER, format!("{what} is null"))
}

pub struct TzGroup {
    group: Group,
}

pub struct TzJob {
    spec: JobSpec,
}

pub struct TzResult {
    output: JobOutput,
    format: Format,
}

/// Last error message on this thread, or null. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn tz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a `tz_*` function documented as returning an owned string, and must not
/// be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a group from `cyclic:n`, `dihedral:n`, `symmetric:n` or a JSON spec.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tz_group_new(spec: *const c_char, out: *mut *mut TzGroup) -> TzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(spec, "spec")?;
        let parsed = GroupSpec::parse(text).map_err(|e| (TZ_MALFORMED, e.to_string()))?;
        let group = Group::build(&parsed).map_err(|e| (TZ_MALFORMED, e.to_string()))?;
        *out = Box::into_raw(Box::new(TzGroup { group }));
        Ok(TZ_OK)
    })
}

/// # Safety
/// `group` must be null or a handle from [`tz_group_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tz_group_free(group: *mut TzGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Group order, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tz_group_order(group: *const TzGroup) -> usize {
    group.as_ref().map_or(0, |g| g.group.order())
}

/// Number of subgroups, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tz_group_subgroup_count(group: *const TzGroup) -> usize {
    group.as_ref().map_or(0, |g| g.group.lattice().len())
}

/// Number of conjugacy classes of subgroups, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tz_group_class_count(group: *const TzGroup) -> usize {
    group.as_ref().map_or(0, |g| g.group.lattice().class_count())
}

/// Group name (`C2`, `S3`, ...) as an owned string; free with [`tz_string_free`].
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tz_group_name(group: *const TzGroup) -> *mut c_char {
    group
        .as_ref()
        .and_then(|g| CString::new(g.group.name()).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}

/// New job for `command` (`table`, `verify`, `adjunction`, `crossed`, `witt`, `marks`) over
/// `group`, with the same defaults as the command line.
///
/// # Safety
/// Both strings must be valid NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tz_job_new(command: *const c_char, group: *const c_char, out: *mut *mut TzJob) -> TzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = ptr::null_mut();
        let name = read_str(command, "command")?;
        let command = Command::parse(name).ok_or_else(|| (TZ_MALFORMED, format!("unknown command {name:?}")))?;
        let group = read_str(group, "group")?;
        *out = Box::into_raw(Box::new(TzJob { spec: JobSpec::new(command, group) }));
        Ok(TZ_OK)
    })
}

/// # Safety
/// `job` must be null or a handle from [`tz_job_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tz_job_free(job: *mut TzJob) {
    if !job.is_null() {
        drop(Box::from_raw(job));
    }
}

/// Sets one option: `monoid`, `functor`, `level`, `seed`, `samples` or `format` (`json`/`text`).
///
/// # Safety
/// `job` must be a live handle; `key` and `value` valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn tz_job_set(job: *mut TzJob, key: *const c_char, value: *const c_char) -> TzStatus {
    guard(|| {
        let job = job.as_mut().ok_or_else(|| null_arg("job"))?;
        let key = read_str(key, "key")?;
        let value = read_str(value, "value")?;
        let bad = |what: &str| (TZ_MALFORMED, format!("invalid {what} {value:?}"));
        let spec = &mut job.spec;
        match key {
            "monoid" => spec.monoid = value.to_string(),
            "functor" => spec.functor = value.to_string(),
            "level" => spec.level = value.to_string(),
            "seed" => spec.seed = value.parse().map_err(|_| bad("seed"))?,
            "samples" => spec.samples = value.parse().map_err(|_| bad("samples"))?,
            "format" => {
                spec.format = match value {
                    "json" => Format::Json,
                    "text" => Format::Text,
                    _ => return Err(bad("format")),
                }
            }
            _ => return Err((TZ_MALFORMED, format!("unknown option {key:?}"))),
        }
        Ok(TZ_OK)
    })
}

/// Runs the job. On `TZ_OK` or `TZ_VIOLATIONS` `*out` holds a result handle.
///
/// # Safety
/// `job` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tz_job_run(job: *const TzJob, out: *mut *mut TzResult) -> TzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = ptr::null_mut();
        let job = job.as_ref().ok_or_else(|| null_arg("job"))?;
        let output = run(&job.spec).map_err(|e| match e {
            JobError::Malformed(_) => (TZ_MALFORMED, e.to_string()),
            _ => (TZ_FAILED, e.to_string()),
        })?;
        let status = if output.violations > 0 { TZ_VIOLATIONS } else { TZ_OK };
        *out = Box::into_raw(Box::new(TzResult { output, format: job.spec.format }));
        Ok(status)
    })
}

/// # Safety
/// `result` must be null or a handle from [`tz_job_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tz_result_free(result: *mut TzResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Number of violations the job reported.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tz_result_violations(result: *const TzResult) -> usize {
    result.as_ref().map_or(0, |r| r.output.violations)
}

/// The process exit code the command line would use for this result.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tz_result_exit_code(result: *const TzResult) -> i32 {
    result.as_ref().map_or(TZ_NULL_POINTER, |r| r.output.exit_code())
}

/// The rendered document in the job's format, byte-identical to the command line output.
/// Owned string; free with [`tz_string_free`].
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tz_result_render(result: *const TzResult) -> *mut c_char {
    result
        .as_ref()
        .and_then(|r| CString::new(r.output.render(r.format)).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}
