//! C ABI for the qentire library.
//!
//! Conventions:
//! * Handles are opaque pointers created and destroyed by this library
//!   (`qe_context_new` / `qe_context_free`).
//! * Every fallible call returns a [`QeStatus`]; on any status other
//!   than `OK` (or `VERIFY_FAILED`, which still produces a report), the
//!   thread-local message from [`qe_last_error`] describes the problem.
//! * Results are UTF-8 JSON strings allocated by this library; release
//!   them with [`qe_string_free`]. The payload shapes are the library's
//!   canonical serializations (decimal strings at full working
//!   precision).
//! * All entry points catch panics and report them as `INTERNAL` rather
//!   than unwinding across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::{json, Value};

use qentire::complex::Cplx;
use qentire::error::Error;
use qentire::precision::PrecisionContext;
use qentire::real::Real;
use qentire::roots::{certify_real_roots, find_poly_roots, locate_entire_zeros};
use qentire::series::{coefficients, evaluate, SeriesSpec};
use qentire::verify;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QeStatus {
    /// Success.
    Ok = 0,
    /// A verification suite ran to completion with failing instances
    /// (the report JSON is still produced).
    VerifyFailed = 1,
    /// A parameter lies outside an operation's domain, or an input
    /// string failed to parse.
    Domain = 2,
    /// A numerical guard tripped (convergence, stability, consistency);
    /// retrying at higher precision usually resolves it.
    Guard = 3,
    /// Null pointer, invalid UTF-8, or a structurally invalid argument.
    Usage = 64,
    /// An internal invariant failed (a panic was caught).
    Internal = 70,
}

/// Opaque evaluation context carrying precision and tolerances.
pub struct QeContext {
    ctx: PrecisionContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let sanitized: String = message.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("NUL bytes stripped"));
    });
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Fail {
    status: QeStatus,
    message: String,
}

impl Fail {
    fn usage(message: impl Into<String>) -> Fail {
        Fail {
            status: QeStatus::Usage,
            message: message.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match e {
            Error::Domain(_) | Error::Parse(_) | Error::LengthMismatch(_) => QeStatus::Domain,
            _ => QeStatus::Guard,
        };
        Fail {
            status,
            message: e.to_string(),
        }
    }
}

/// Read a required, NUL-terminated UTF-8 argument.
///
/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if ptr.is_null() {
        return Err(Fail::usage(format!("{what} must not be null")));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| Fail::usage(format!("{what} must be valid UTF-8")))
}

unsafe fn read_context<'a>(ptr: *const QeContext) -> Result<&'a PrecisionContext, Fail> {
    if ptr.is_null() {
        return Err(Fail::usage("context must not be null"));
    }
    Ok(unsafe { &(*ptr).ctx })
}

/// Run `body`, write its JSON into `out_json`, translate failures and
/// panics into statuses, and keep the last-error slot in sync.
fn entry(
    out_json: *mut *mut c_char,
    body: impl FnOnce() -> Result<(Value, QeStatus), Fail>,
) -> QeStatus {
    if out_json.is_null() {
        set_last_error("out_json must not be null");
        return QeStatus::Usage;
    }
    unsafe { *out_json = std::ptr::null_mut() };
    let outcome = catch_unwind(AssertUnwindSafe(body));
    match outcome {
        Ok(Ok((value, status))) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON cannot fail");
            let cstr = CString::new(text).expect("JSON contains no NUL bytes");
            unsafe { *out_json = cstr.into_raw() };
            clear_last_error();
            status
        }
        Ok(Err(fail)) => {
            set_last_error(&fail.message);
            fail.status
        }
        Err(panic) => {
            let detail = panic
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal error: {detail}"));
            QeStatus::Internal
        }
    }
}

fn parse_spec(text: &str, bits: u32) -> Result<SeriesSpec, Fail> {
    let value: Value = serde_json::from_str(text).map_err(|e| Fail {
        status: QeStatus::Domain,
        message: format!("spec JSON is not valid JSON: {e}"),
    })?;
    let spec = SeriesSpec::from_json(&value, bits)?;
    spec.validate()?;
    Ok(spec)
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn qe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create an evaluation context. Returns null (and sets the last error)
/// when `precision_bits` is below 64.
#[no_mangle]
pub extern "C" fn qe_context_new(precision_bits: u32) -> *mut QeContext {
    match PrecisionContext::new(precision_bits) {
        Ok(ctx) => {
            clear_last_error();
            Box::into_raw(Box::new(QeContext { ctx }))
        }
        Err(e) => {
            set_last_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Destroy a context created by [`qe_context_new`]. Null is a no-op.
///
/// # Safety
/// `ctx` must be null or a pointer returned by `qe_context_new` that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qe_context_free(ctx: *mut QeContext) {
    if !ctx.is_null() {
        drop(unsafe { Box::from_raw(ctx) });
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message describing the most recent failure on this thread, or null
/// after a success. The pointer stays valid until the next call on the
/// same thread; do not free it.
#[no_mangle]
pub extern "C" fn qe_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Evaluate a series at a point.
///
/// `spec_json` is `{"family": "...", "params": {...}}`; `z_re`/`z_im`
/// are decimal strings (`z_im` may be null for a real point). On `OK`,
/// `*out_json` holds `{family, params, z, value, certificate}`.
///
/// # Safety
/// Pointer arguments must be null or valid per their descriptions;
/// `out_json` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn qe_eval_json(
    ctx: *const QeContext,
    spec_json: *const c_char,
    z_re: *const c_char,
    z_im: *const c_char,
    out_json: *mut *mut c_char,
) -> QeStatus {
    entry(out_json, || {
        let ctx = unsafe { read_context(ctx) }?;
        let bits = ctx.bits();
        let spec = parse_spec(unsafe { read_str(spec_json, "spec_json") }?, bits)?;
        let re = Real::parse(unsafe { read_str(z_re, "z_re") }?, bits)?;
        let im = if z_im.is_null() {
            Real::zero(bits)
        } else {
            Real::parse(unsafe { read_str(z_im, "z_im") }?, bits)?
        };
        let z = Cplx::new(re, im);
        let (value, cert) = evaluate(&spec, &z, ctx)?;
        Ok((
            json!({
                "family": spec.family_name(),
                "params": spec.params_json(),
                "precision_bits": bits,
                "z": value_json(&z),
                "value": value_json(&value),
                "certificate": serde_json::to_value(&cert).expect("serializable"),
            }),
            QeStatus::Ok,
        ))
    })
}

fn value_json(z: &Cplx) -> Value {
    json!({"re": z.re.to_decimal(), "im": z.im.to_decimal()})
}

/// Locate and certify zeros.
///
/// Terminating specs report their full root set and ignore `count`;
/// non-terminating specs require `count >= 1`. On `OK`, `*out_json`
/// holds the zero set with per-zero residuals, the realness report, and
/// (for non-terminating specs) the truncation certificate.
///
/// # Safety
/// Pointer arguments must be null or valid per their descriptions;
/// `out_json` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn qe_zeros_json(
    ctx: *const QeContext,
    spec_json: *const c_char,
    count: usize,
    out_json: *mut *mut c_char,
) -> QeStatus {
    entry(out_json, || {
        let ctx = unsafe { read_context(ctx) }?;
        let spec = parse_spec(unsafe { read_str(spec_json, "spec_json") }?, ctx.bits())?;
        let set = match spec.termination_degree() {
            Some(deg) => {
                let seq = coefficients(&spec, deg as usize)?;
                let mut set = find_poly_roots(&seq, ctx)?;
                set.report = Some(certify_real_roots(&seq, &set, ctx)?);
                set
            }
            None => {
                if count == 0 {
                    return Err(Fail::usage(
                        "count must be >= 1 for a non-terminating spec",
                    ));
                }
                locate_entire_zeros(&spec, count, ctx)?
            }
        };
        Ok((
            serde_json::to_value(&set).expect("serializable"),
            QeStatus::Ok,
        ))
    })
}

/// Run a verification suite: `poly`, `func1`, `func2`, `identities`,
/// `limits`, `order`, or `all`, on its default grid.
///
/// On `OK` or `VERIFY_FAILED`, `*out_json` holds an array of
/// verification reports; `VERIFY_FAILED` means at least one instance
/// failed (details are inside the reports).
///
/// # Safety
/// Pointer arguments must be null or valid per their descriptions;
/// `out_json` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn qe_verify_json(
    ctx: *const QeContext,
    suite: *const c_char,
    out_json: *mut *mut c_char,
) -> QeStatus {
    entry(out_json, || {
        let ctx = unsafe { read_context(ctx) }?;
        let suite = unsafe { read_str(suite, "suite") }?;
        let bits = ctx.bits();
        let reports = match suite {
            "poly" => vec![verify::verify_thm_poly(
                &verify::GridSpec::default_poly(bits),
                ctx,
            )?],
            "func1" => vec![verify::verify_thm_func1(
                &verify::GridSpec::default_func1(bits),
                5,
                ctx,
            )?],
            "func2" => vec![verify::verify_thm_func2(
                &verify::GridSpec::default_func2(bits),
                5,
                ctx,
            )?],
            "identities" => vec![verify::verify_identities(
                &verify::default_identity_bases(bits),
                &verify::default_identity_samples(bits),
                ctx,
            )?],
            "limits" => vec![verify::verify_limits(&verify::default_limit_bases(bits), ctx)?],
            "order" => vec![verify::verify_order(ctx)?],
            "all" => verify::run_all(ctx)?,
            other => {
                return Err(Fail {
                    status: QeStatus::Domain,
                    message: format!(
                        "unknown suite {other:?} (expected poly, func1, func2, identities, limits, order, or all)"
                    ),
                })
            }
        };
        let status = if reports.iter().all(|r| r.passed()) {
            QeStatus::Ok
        } else {
            QeStatus::VerifyFailed
        };
        Ok((
            serde_json::to_value(&reports).expect("serializable"),
            status,
        ))
    })
}
