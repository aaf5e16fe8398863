//! C interface to `zerotalk`.
//!
//! Sources live behind an opaque `ZtSource` handle created from a JSON spec
//! document. Every fallible call returns a `ZtStatus`; on failure the message
//! is available from `zt_last_error` on the same thread. Strings handed out
//! by the library must be released with `zt_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zerotalk::bounds::{chain_bound, hypergraphical_view, lamination_bound};
use zerotalk::cli::{cmd_jgk, cmd_oracle, cmd_verify};
use zerotalk::mcf::{gk_oracle, jgk, CapacityStatus, WitnessPayload};
use zerotalk::partition::Partition;
use zerotalk::{sim, Error, Limits, Source, SourceSpecFile};

/// Opaque source handle.
pub struct ZtSource {
    inner: Source,
}

/// Status codes. Values 0–5 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZtStatus {
    Ok = 0,
    /// A verification check failed.
    Mismatch = 1,
    Parse = 2,
    Model = 3,
    Unsupported = 4,
    ResourceLimit = 5,
    NullArgument = 6,
    /// The library panicked; the handle involved should be considered lost.
    Panic = 7,
}

/// Which report `zt_report_json` renders.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZtReportKind {
    Jgk = 0,
    Oracle = 1,
    Verify = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZtJgk {
    pub bits: f64,
    /// True when the value is the capacity, false when only a lower bound.
    pub proven: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZtOracle {
    pub bits: f64,
    pub components: usize,
    pub support: usize,
}

/// Lamination bound for one partition. `slope` and `bound_at_zero` are NaN
/// and `bound_at_rate` is +inf (or NaN at rate 0) when `vacuous` is set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZtLamination {
    pub alpha_numer: u64,
    pub alpha_denom: u64,
    pub h_g_bits: f64,
    pub slope: f64,
    pub bound_at_zero: f64,
    pub bound_at_rate: f64,
    pub vacuous: bool,
    /// Set when a two-user finite linear source was converted first.
    pub converted: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ZtSimulation {
    pub n: usize,
    pub seed: u64,
    pub agreement: bool,
    pub empirical_rate_bits: f64,
    pub h_g_bits: f64,
    pub tolerance_bits: f64,
    pub within_tolerance: bool,
    pub discussion_bits: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ZtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => ZtStatus::Parse,
            4 => ZtStatus::Unsupported,
            5 => ZtStatus::ResourceLimit,
            _ => ZtStatus::Model,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ZtStatus::NullArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ZtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            ZtStatus::Panic
        }
    }
}

unsafe fn handle<'a>(p: *const ZtSource) -> Result<&'a Source, Failure> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| null("source"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ZtStatus::Parse, format!("{what} is not valid UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn limits() -> Result<Limits, Failure> {
    Ok(Limits::from_env()?)
}

/// Parses a JSON spec document into a new handle stored in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zt_source_from_json(json: *const c_char, out: *mut *mut ZtSource) -> ZtStatus {
    guard(|| {
        let s = SourceSpecFile::parse(text(json, "json")?)?.to_source()?;
        write(out, Box::into_raw(Box::new(ZtSource { inner: s })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `source` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zt_source_free(source: *mut ZtSource) {
    if !source.is_null() {
        drop(Box::from_raw(source));
    }
}

/// Number of users, or 0 for a null handle.
///
/// # Safety
/// `source` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zt_source_user_count(source: *const ZtSource) -> usize {
    source.as_ref().map_or(0, |s| s.inner.user_count())
}

/// Serializes the source back to a JSON spec document.
///
/// # Safety
/// `source` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zt_source_to_json(source: *const ZtSource, out: *mut *mut c_char) -> ZtStatus {
    guard(|| write(out, into_c_string(SourceSpecFile::from_source(handle(source)?).to_json())))
}

/// Closed-form common information.
///
/// # Safety
/// `source` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zt_jgk(source: *const ZtSource, out: *mut ZtJgk) -> ZtStatus {
    guard(|| {
        let j = jgk(handle(source)?, &limits()?)?;
        write(out, ZtJgk { bits: j.bits(), proven: j.status == CapacityStatus::Proven })
    })
}

/// Brute-force common information over the expanded joint support.
///
/// # Safety
/// `source` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zt_oracle(source: *const ZtSource, out: *mut ZtOracle) -> ZtStatus {
    guard(|| {
        let joint = handle(source)?.expand(&limits()?)?;
        let w = gk_oracle(&joint);
        let WitnessPayload::Labeling(l) = &w.payload else {
            unreachable!("oracle always labels")
        };
        write(out, ZtOracle { bits: w.entropy_bits, components: l.component_count(), support: l.labels.len() })
    })
}

/// Lamination bound for `partition` (e.g. `"1,2|3"`; null means singletons)
/// evaluated at `rate`.
///
/// # Safety
/// `source` must be a live handle, `partition` null or NUL-terminated, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zt_lamination(
    source: *const ZtSource,
    partition: *const c_char,
    rate: f64,
    out: *mut ZtLamination,
) -> ZtStatus {
    guard(|| {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Failure(ZtStatus::Model, format!("rate must be finite and nonnegative, got {rate}")));
        }
        let (h, converted) = hypergraphical_view(handle(source)?)?;
        let spec = if partition.is_null() { "singletons" } else { text(partition, "partition")? };
        let b = lamination_bound(&h, &Partition::parse(h.user_count(), spec)?)?;
        write(
            out,
            ZtLamination {
                alpha_numer: *b.alpha.numer(),
                alpha_denom: *b.alpha.denom(),
                h_g_bits: b.h_g_bits,
                slope: b.slope().unwrap_or(f64::NAN),
                bound_at_zero: b.bound_at(0.0).unwrap_or(f64::NAN),
                bound_at_rate: b.bound_at(rate).unwrap_or(f64::NAN),
                vacuous: b.is_vacuous(),
                converted,
            },
        )
    })
}

/// Chain bound for a user ordering of 0-based ids. A null `ordering`
/// means the identity order.
///
/// # Safety
/// `ordering` must be null or point to `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn zt_chain_bound(
    source: *const ZtSource,
    ordering: *const usize,
    len: usize,
    out: *mut f64,
) -> ZtStatus {
    guard(|| {
        let s = handle(source)?;
        let order: Vec<usize> = if ordering.is_null() {
            (0..s.user_count()).collect()
        } else {
            std::slice::from_raw_parts(ordering, len).to_vec()
        };
        write(out, chain_bound(s, &order)?)
    })
}

/// Runs the zero-discussion key agreement simulation.
///
/// # Safety
/// `source` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zt_simulate(source: *const ZtSource, n: usize, seed: u64, out: *mut ZtSimulation) -> ZtStatus {
    guard(|| {
        let r = sim::run(handle(source)?, n, seed, &limits()?)?;
        write(
            out,
            ZtSimulation {
                n: r.n,
                seed: r.seed,
                agreement: r.agreement,
                empirical_rate_bits: r.empirical_rate_bits,
                h_g_bits: r.h_g_bits,
                tolerance_bits: r.tolerance_bits,
                within_tolerance: r.within_tolerance,
                discussion_bits: r.discussion_bits,
            },
        )
    })
}

/// Converts a two-user finite linear source into a new hypergraphical handle.
///
/// # Safety
/// `source` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zt_convert_to_hypergraphical(source: *const ZtSource, out: *mut *mut ZtSource) -> ZtStatus {
    guard(|| {
        let h = match handle(source)? {
            Source::FiniteLinear(f) => f.to_hypergraphical()?,
            other => {
                return Err(Failure(
                    ZtStatus::Unsupported,
                    format!("conversion needs a two-user finite linear source, got {}", other.model_name()),
                ))
            }
        };
        write(out, Box::into_raw(Box::new(ZtSource { inner: h.into() })))
    })
}

/// Renders the JSON report the command line prints with `--json`. A
/// failing verification still writes the report and returns `Mismatch`.
///
/// # Safety
/// `source` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zt_report_json(source: *const ZtSource, kind: ZtReportKind, out: *mut *mut c_char) -> ZtStatus {
    guard(|| {
        let s = handle(source)?;
        let limits = limits()?;
        let report = match kind {
            ZtReportKind::Jgk => cmd_jgk(s, &limits)?,
            ZtReportKind::Oracle => cmd_oracle(s, &limits)?,
            ZtReportKind::Verify => cmd_verify(s, &limits)?,
        };
        write(out, into_c_string(report.to_json()))?;
        match &report.verification {
            Some(v) if !v.pass => Err(Failure(ZtStatus::Mismatch, "verification failed".into())),
            _ => Ok(()),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn zt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
