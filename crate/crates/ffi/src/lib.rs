//! C ABI over swiperkit.
//!
//! Objects are opaque handles created by `sw_*_new`/`sw_*_from_*` and
//! released with the matching `sw_*_free`. Every fallible call returns an
//! `SwStatus`; on failure `sw_last_error` describes the most recent error on
//! the calling thread. Strings are NUL-terminated UTF-8. Thresholds are
//! passed as text (`"1/3"`, `"0.25"`) and parsed exactly.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use swiperkit::distribution::{load_distribution, InputFormat, WeightDistribution};
use swiperkit::error::Error;
use swiperkit::problem::ProblemSpec;
use swiperkit::rational::Rational;
use swiperkit::solver::{self, SolveMode, SolveReport};
use swiperkit::tickets::TicketAssignment;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwStatus {
    SwOk = 0,
    /// A required pointer argument was null.
    SwNullPointer = 1,
    /// A string argument was not valid UTF-8.
    SwInvalidUtf8 = 2,
    /// Unknown problem kind or solve mode constant.
    SwInvalidArgument = 3,
    /// Weight or ticket input could not be parsed or is inconsistent.
    SwParseError = 4,
    /// Thresholds do not describe a valid problem.
    SwInvalidProblem = 5,
    /// Ticket count does not match the number of parties.
    SwLengthMismatch = 6,
    /// A ticket bound or total does not fit in 64 bits.
    SwOverflow = 7,
    /// A file could not be read.
    SwIoError = 8,
    /// The caller's buffer is too small.
    SwBufferTooSmall = 9,
    /// Any other library error.
    SwInternal = 10,
    /// The library panicked; the call had no effect.
    SwPanic = 11,
}

/// Weight Restriction; thresholds `alpha_w`, `alpha_n`.
pub const SW_PROBLEM_WR: u32 = 0;
/// Weight Qualification; thresholds `beta_w`, `beta_n`.
pub const SW_PROBLEM_WQ: u32 = 1;
/// Weight Separation; thresholds `alpha`, `beta`.
pub const SW_PROBLEM_WS: u32 = 2;

/// Quick checks with exact fallback; the result is a local minimum.
pub const SW_MODE_FULL: u32 = 0;
/// Conservative quick check only.
pub const SW_MODE_LINEAR: u32 = 1;

/// CSV rows `id,weight`.
pub const SW_FORMAT_CSV: u32 = 0;
/// JSON array of `{"id", "weight"}` objects.
pub const SW_FORMAT_JSON: u32 = 1;

pub struct SwDistribution(WeightDistribution);

pub struct SwProblem(ProblemSpec);

pub struct SwReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidNumber { .. }
            | Error::NegativeWeight { .. }
            | Error::DuplicateId { .. }
            | Error::Malformed { .. }
            | Error::EmptyDistribution
            | Error::ZeroTotalWeight => SwStatus::SwParseError,
            Error::InvalidProblem(_) => SwStatus::SwInvalidProblem,
            Error::LengthMismatch { .. } => SwStatus::SwLengthMismatch,
            Error::BoundOverflow(_) | Error::TicketOverflow => SwStatus::SwOverflow,
            _ => SwStatus::SwInternal,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SwStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SwStatus::SwOk,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {message}"));
            SwStatus::SwPanic
        }
    }
}

fn non_null<T>(ptr: *const T, name: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        Err(Failure(SwStatus::SwNullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, Failure> {
    non_null(ptr, name)?;
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(SwStatus::SwInvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn format_of(format: u32) -> Result<InputFormat, Failure> {
    match format {
        SW_FORMAT_CSV => Ok(InputFormat::Csv),
        SW_FORMAT_JSON => Ok(InputFormat::Json),
        other => Err(Failure(SwStatus::SwInvalidArgument, format!("unknown format {other}"))),
    }
}

fn mode_of(mode: u32) -> Result<SolveMode, Failure> {
    match mode {
        SW_MODE_FULL => Ok(SolveMode::Full),
        SW_MODE_LINEAR => Ok(SolveMode::Linear),
        other => Err(Failure(SwStatus::SwInvalidArgument, format!("unknown mode {other}"))),
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the most recent failed call on this thread, or `""`. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a distribution from `text` in `format` (`SW_FORMAT_*`).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_distribution_from_text(
    text: *const c_char,
    format: u32,
    out: *mut *mut SwDistribution,
) -> SwStatus {
    guard(|| {
        non_null(out, "out")?;
        let body = read_str(text, "text")?;
        let dist = load_distribution(body.as_bytes(), format_of(format)?)?;
        put(out, SwDistribution(dist));
        Ok(())
    })
}

/// Reads a distribution file; `.json` files are JSON, anything else CSV.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sw_distribution_from_file(
    path: *const c_char,
    out: *mut *mut SwDistribution,
) -> SwStatus {
    guard(|| {
        non_null(out, "out")?;
        let path = std::path::Path::new(read_str(path, "path")?);
        let file = std::fs::File::open(path)
            .map_err(|e| Failure(SwStatus::SwIoError, format!("{}: {e}", path.display())))?;
        let dist = load_distribution(std::io::BufReader::new(file), InputFormat::from_path(path))?;
        put(out, SwDistribution(dist));
        Ok(())
    })
}

/// Number of parties.
///
/// # Safety
/// `dist` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn sw_distribution_len(dist: *const SwDistribution) -> usize {
    dist.as_ref().map_or(0, |d| d.0.len())
}

/// # Safety
/// `dist` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sw_distribution_free(dist: *mut SwDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Builds a problem of `kind` (`SW_PROBLEM_*`). The thresholds are
/// `(alpha_w, alpha_n)` for WR, `(beta_w, beta_n)` for WQ and
/// `(alpha, beta)` for WS.
///
/// # Safety
/// `first` and `second` must be NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sw_problem_new(
    kind: u32,
    first: *const c_char,
    second: *const c_char,
    out: *mut *mut SwProblem,
) -> SwStatus {
    guard(|| {
        non_null(out, "out")?;
        let a = Rational::parse(read_str(first, "first")?)?;
        let b = Rational::parse(read_str(second, "second")?)?;
        let spec = match kind {
            SW_PROBLEM_WR => ProblemSpec::restriction(a, b)?,
            SW_PROBLEM_WQ => ProblemSpec::qualification(a, b)?,
            SW_PROBLEM_WS => ProblemSpec::separation(a, b)?,
            other => return Err(Failure(SwStatus::SwInvalidArgument, format!("unknown problem kind {other}"))),
        };
        put(out, SwProblem(spec));
        Ok(())
    })
}

/// # Safety
/// `problem` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sw_problem_free(problem: *mut SwProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Closed-form ticket bound for `n` parties.
///
/// # Safety
/// `problem` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sw_ticket_bound(problem: *const SwProblem, n: usize, out: *mut u64) -> SwStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(out, "out")?;
        *out = solver::ticket_bound(&(*problem).0, n)?;
        Ok(())
    })
}

/// Searches the ticket family for a valid assignment (`SW_MODE_*`).
///
/// # Safety
/// `problem` and `dist` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sw_solve(
    problem: *const SwProblem,
    dist: *const SwDistribution,
    mode: u32,
    out: *mut *mut SwReport,
) -> SwStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(dist, "dist")?;
        non_null(out, "out")?;
        let report = solver::solve(&(*problem).0, &(*dist).0, mode_of(mode)?)?;
        put(out, SwReport(report));
        Ok(())
    })
}

/// Exact validity of `tickets[0..len]` against `dist`.
///
/// # Safety
/// `problem` and `dist` must be live handles, `tickets` must point to `len`
/// values (it may be null when `len` is 0), and `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_validate(
    problem: *const SwProblem,
    dist: *const SwDistribution,
    tickets: *const u64,
    len: usize,
    valid: *mut bool,
) -> SwStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(dist, "dist")?;
        non_null(valid, "valid")?;
        let values = if len == 0 {
            Vec::new()
        } else {
            non_null(tickets, "tickets")?;
            std::slice::from_raw_parts(tickets, len).to_vec()
        };
        let assignment = TicketAssignment::new(values)?;
        *valid = solver::validate(&(*problem).0, &(*dist).0, &assignment)?;
        Ok(())
    })
}

/// Total tickets of the report; 0 for null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sw_report_total(report: *const SwReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.total)
}

/// Closed-form bound the search started from; 0 for null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sw_report_bound(report: *const SwReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.bound)
}

/// True when the result is a certified local minimum (full mode).
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sw_report_locally_minimal(report: *const SwReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.locally_minimal)
}

/// Parties holding at least one ticket.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sw_report_holders(report: *const SwReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.stats.holders)
}

/// Largest per-party ticket count.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sw_report_max_tickets(report: *const SwReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.stats.max_tickets)
}

/// Number of per-party entries, equal to the distribution length.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sw_report_len(report: *const SwReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.assignment.len())
}

/// Copies the per-party tickets, in party order, into `buf[0..len]`.
///
/// # Safety
/// `report` must be a live handle and `buf` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn sw_report_tickets(report: *const SwReport, buf: *mut u64, len: usize) -> SwStatus {
    guard(|| {
        non_null(report, "report")?;
        let tickets = (*report).0.assignment.as_slice();
        if len < tickets.len() {
            return Err(Failure(
                SwStatus::SwBufferTooSmall,
                format!("buffer holds {len} values, {} needed", tickets.len()),
            ));
        }
        if !tickets.is_empty() {
            non_null(buf, "buf")?;
            std::ptr::copy_nonoverlapping(tickets.as_ptr(), buf, tickets.len());
        }
        Ok(())
    })
}

/// # Safety
/// `report` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sw_report_free(report: *mut SwReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
