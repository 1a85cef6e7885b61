//! C ABI over the workbench: load a spec, run a command, read the report.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `*_free`. Every function returns a [`UhfStatus`]; on failure the message
//! is available from [`uhf_last_error`] on the same thread. Panics are caught
//! at the boundary and reported as [`UhfStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uhfbench::cli::{self, Command, RunOptions};
use uhfbench::groups::FgAbelianGroup;
use uhfbench::ktheory::k_invariants;
use uhfbench::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UhfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Schema = 3,
    InvalidInput = 4,
    Io = 5,
    UnknownCommand = 6,
    Panic = 7,
}

/// A parsed and validated spec document.
pub struct UhfSpec {
    inner: cli::SpecDocument,
}

/// A finished report, with its JSON rendering.
pub struct UhfReport {
    exit_code: i32,
    json: CString,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> UhfStatus {
    match err {
        Error::Schema { .. } => UhfStatus::Schema,
        Error::Io(_) => UhfStatus::Io,
        _ => UhfStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (UhfStatus, String)>) -> UhfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UhfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside uhfbench");
            UhfStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (UhfStatus, String)> {
    if p.is_null() {
        return Err((UhfStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (UhfStatus::InvalidUtf8, e.to_string()))
}

fn lift(err: Error) -> (UhfStatus, String) {
    (status_of(&err), err.to_string())
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn uhf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn uhf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Loads a spec from a file path or `builtin:NAME`.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uhf_spec_load(source: *const c_char, out: *mut *mut UhfSpec) -> UhfStatus {
    guard(|| {
        if out.is_null() {
            return Err((UhfStatus::NullPointer, "null output handle".into()));
        }
        let doc = cli::load_spec(read_str(source)?).map_err(lift)?;
        *out = Box::into_raw(Box::new(UhfSpec { inner: doc }));
        Ok(())
    })
}

/// Parses a spec from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uhf_spec_parse(json: *const c_char, out: *mut *mut UhfSpec) -> UhfStatus {
    guard(|| {
        if out.is_null() {
            return Err((UhfStatus::NullPointer, "null output handle".into()));
        }
        let doc = cli::parse_spec(read_str(json)?).map_err(lift)?;
        *out = Box::into_raw(Box::new(UhfSpec { inner: doc }));
        Ok(())
    })
}

/// # Safety
/// `spec` must come from `uhf_spec_load`/`uhf_spec_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn uhf_spec_free(spec: *mut UhfSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Runs `command` (`analyze`, `induce`, `tower`, `witness`, `bratteli`,
/// `kgroups` or `report`) with the spec's own parameters.
///
/// # Safety
/// `spec` must be a live handle, `command` a NUL-terminated string, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uhf_run(spec: *const UhfSpec, command: *const c_char, out: *mut *mut UhfReport) -> UhfStatus {
    guard(|| {
        if spec.is_null() || out.is_null() {
            return Err((UhfStatus::NullPointer, "null handle".into()));
        }
        let name = read_str(command)?;
        let cmd = name
            .parse::<Command>()
            .map_err(|_| (UhfStatus::UnknownCommand, format!("unknown command `{name}`")))?;
        let report = cli::run(cmd, &(*spec).inner, &RunOptions::default()).map_err(lift)?;
        let json = CString::new(report.to_json()).expect("JSON has no NUL bytes");
        let text = CString::new(cli::render_text(&report)).expect("text has no NUL bytes");
        *out = Box::into_raw(Box::new(UhfReport {
            exit_code: report.exit_code,
            json,
            text,
        }));
        Ok(())
    })
}

/// 0 pass, 2 certified failure, 3 unknown.
///
/// # Safety
/// `report` must be a live handle or null (null gives 64).
#[no_mangle]
pub unsafe extern "C" fn uhf_report_exit_code(report: *const UhfReport) -> i32 {
    if report.is_null() {
        return cli::EXIT_USAGE;
    }
    (*report).exit_code
}

/// The report as JSON; owned by the handle.
///
/// # Safety
/// `report` must be a live handle or null (null gives a null pointer).
#[no_mangle]
pub unsafe extern "C" fn uhf_report_json(report: *const UhfReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).json.as_ptr()
}

/// The plain-text rendering; owned by the handle.
///
/// # Safety
/// `report` must be a live handle or null (null gives a null pointer).
#[no_mangle]
pub unsafe extern "C" fn uhf_report_text(report: *const UhfReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).text.as_ptr()
}

/// # Safety
/// `report` must come from `uhf_run` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn uhf_report_free(report: *mut UhfReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Ranks of `K_0` and `K_1` of the crossed product by `Z^free_rank` under
/// the Rokhlin hypothesis. Fails with `InvalidInput` when the rank does not
/// fit in 64 bits.
///
/// # Safety
/// `k0` and `k1` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uhf_k_ranks(free_rank: u32, k0: *mut u64, k1: *mut u64) -> UhfStatus {
    guard(|| {
        if k0.is_null() || k1.is_null() {
            return Err((UhfStatus::NullPointer, "null output".into()));
        }
        let inv = k_invariants(&FgAbelianGroup::free(free_rank as usize), true);
        let rank = |g: &uhfbench::ktheory::KGroup| {
            g.rank().and_then(|r| u64::try_from(r).ok()).ok_or_else(|| {
                (
                    UhfStatus::InvalidInput,
                    format!("rank of {} exceeds 64 bits", g.describe()),
                )
            })
        };
        *k0 = rank(&inv.k0)?;
        *k1 = rank(&inv.k1)?;
        Ok(())
    })
}
