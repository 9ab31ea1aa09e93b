//! C ABI over `slp_membership`.
//!
//! Every fallible call returns an [`SlpmStatus`]; on anything but
//! `SLPM_STATUS_OK` a description is available from
//! [`slpm_last_error_message`] on the same thread. Instances are opaque and
//! never consumed by a call, so one instance may be decided repeatedly.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use slp_membership::text::serialize_instance;
use slp_membership::unary::{Strategy, UnaryConfig, DEFAULT_DP_THRESHOLD};
use slp_membership::{
    brute_force_accepts, decide, gen_instance, parse_combined, parse_instance, serialize_combined, DecideOptions,
    Engine, Error, GenParams, Instance, DEFAULT_CAP,
};

/// Opaque handle to a validated instance.
pub struct SlpmInstance(Instance);

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SlpmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Malformed grammar or automaton, or an invariant violation.
    Invalid = 4,
    BudgetExceeded = 5,
    IterationCeiling = 6,
    Precondition = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Copy, Clone, Debug)]
pub struct SlpmGenParams {
    pub seed: u64,
    pub n: usize,
    pub alphabet_size: usize,
    pub state_count: usize,
    pub max_rhs_len: usize,
    pub target_eval_len_log2: u32,
    pub deterministic: bool,
}

#[repr(C)]
#[derive(Copy, Clone, Debug)]
pub struct SlpmDecideOptions {
    /// 0 means the default ceiling 3n + 10.
    pub max_iter: usize,
    pub unary_dp_threshold: u64,
    /// Letter budget for any decompression.
    pub max_expand: usize,
    /// Decide by full decompression instead of recompression.
    pub naive: bool,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, Default)]
pub struct SlpmDecision {
    pub accepted: bool,
    pub iterations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SlpmStatus {
    match e {
        Error::Parse { .. } => SlpmStatus::Parse,
        Error::MalformedGrammar(_) | Error::MalformedAutomaton(_) | Error::Invariants(_) | Error::InvalidIndex(_) => {
            SlpmStatus::Invalid
        }
        Error::BudgetExceeded { .. } => SlpmStatus::BudgetExceeded,
        Error::IterationCeiling { .. } => SlpmStatus::IterationCeiling,
        Error::Io { .. } => SlpmStatus::Io,
        _ => SlpmStatus::Precondition,
    }
}

enum Failure {
    Status(SlpmStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, turning errors and panics into a status plus last-error text.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SlpmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SlpmStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            SlpmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(SlpmStatus::NullArgument, format!("{what} is null"))
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for the call.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::Status(SlpmStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// # Safety
/// `p` is null or was returned by this library and not yet freed.
unsafe fn instance<'a>(p: *const SlpmInstance) -> Result<&'a Instance, Failure> {
    p.as_ref().map(|i| &i.0).ok_or_else(|| null("instance"))
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_instance(out: *mut *mut SlpmInstance, inst: Instance) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(SlpmInstance(inst)));
    Ok(())
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s)
        .map_err(|e| Failure::Status(SlpmStatus::InvalidUtf8, e.to_string()))?
        .into_raw();
    Ok(())
}

/// Parses a grammar text and an automaton text into a new instance.
///
/// # Safety
/// Both texts are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slpm_instance_parse(
    grammar: *const c_char,
    automaton: *const c_char,
    out: *mut *mut SlpmInstance,
) -> SlpmStatus {
    guard(|| {
        let inst = parse_instance(text(grammar, "grammar")?, text(automaton, "automaton")?)?;
        put_instance(out, inst)
    })
}

/// Parses a combined file: grammar, a `---` line, automaton.
///
/// # Safety
/// `combined` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slpm_instance_parse_combined(
    combined: *const c_char,
    out: *mut *mut SlpmInstance,
) -> SlpmStatus {
    guard(|| put_instance(out, parse_combined(text(combined, "text")?)?))
}

/// Generates a random instance; equal params give equal instances.
///
/// # Safety
/// `params` is readable; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slpm_instance_generate(
    params: *const SlpmGenParams,
    out: *mut *mut SlpmInstance,
) -> SlpmStatus {
    guard(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        let inst = gen_instance(&GenParams {
            seed: p.seed,
            n: p.n,
            alphabet_size: p.alphabet_size,
            state_count: p.state_count,
            max_rhs_len: p.max_rhs_len,
            target_eval_len_log2: p.target_eval_len_log2,
            deterministic: p.deterministic,
        })?;
        put_instance(out, inst)
    })
}

/// Writes the combined text form to `*out`.
///
/// # Safety
/// `inst` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slpm_instance_serialize(inst: *const SlpmInstance, out: *mut *mut c_char) -> SlpmStatus {
    guard(|| put_string(out, serialize_combined(instance(inst)?)))
}

/// Writes the grammar and automaton texts separately.
///
/// # Safety
/// `inst` is a live handle; both outs are writable.
#[no_mangle]
pub unsafe extern "C" fn slpm_instance_serialize_parts(
    inst: *const SlpmInstance,
    grammar_out: *mut *mut c_char,
    automaton_out: *mut *mut c_char,
) -> SlpmStatus {
    guard(|| {
        if grammar_out.is_null() || automaton_out.is_null() {
            return Err(null("out"));
        }
        let (g, a) = serialize_instance(instance(inst)?);
        put_string(grammar_out, g)?;
        put_string(automaton_out, a)
    })
}

/// Number of nonterminals, or 0 for a null handle.
///
/// # Safety
/// `inst` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn slpm_instance_n(inst: *const SlpmInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.n())
}

/// |eval(Xn)| in decimal; it may exceed every fixed-width integer.
///
/// # Safety
/// `inst` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slpm_instance_eval_len(inst: *const SlpmInstance, out: *mut *mut c_char) -> SlpmStatus {
    guard(|| put_string(out, instance(inst)?.top_len().to_string()))
}

/// Defaults matching the command-line tool.
#[no_mangle]
pub extern "C" fn slpm_decide_options_default() -> SlpmDecideOptions {
    SlpmDecideOptions {
        max_iter: 0,
        unary_dp_threshold: DEFAULT_DP_THRESHOLD,
        max_expand: DEFAULT_CAP,
        naive: false,
    }
}

/// Decides membership. `options` may be null for defaults.
///
/// # Safety
/// `inst` is a live handle; `options` is null or readable; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn slpm_decide(
    inst: *const SlpmInstance,
    options: *const SlpmDecideOptions,
    out: *mut SlpmDecision,
) -> SlpmStatus {
    guard(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let o = options.as_ref().copied().unwrap_or_else(|| slpm_decide_options_default());
        let opts = DecideOptions {
            max_iter: (o.max_iter > 0).then_some(o.max_iter),
            unary: UnaryConfig {
                strategy: Strategy::Auto,
                dp_threshold: o.unary_dp_threshold,
            },
            cap: o.max_expand,
            engine: if o.naive { Engine::Naive } else { Engine::Recompress },
        };
        let d = decide(inst.clone(), &opts)?;
        *out = SlpmDecision {
            accepted: d.accepted,
            iterations: d.iterations,
        };
        Ok(())
    })
}

/// Decides by decompressing at most `cap` letters.
///
/// # Safety
/// `inst` is a live handle; `accepted` is writable.
#[no_mangle]
pub unsafe extern "C" fn slpm_brute_force(inst: *const SlpmInstance, cap: usize, accepted: *mut bool) -> SlpmStatus {
    guard(|| {
        let inst = instance(inst)?;
        if accepted.is_null() {
            return Err(null("accepted"));
        }
        *accepted = brute_force_accepts(inst, cap)?;
        Ok(())
    })
}

/// # Safety
/// `inst` is null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn slpm_instance_free(inst: *mut SlpmInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `s` is null or a string returned by this library, invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn slpm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn slpm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Constant, NUL-terminated version string.
#[no_mangle]
pub extern "C" fn slpm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use std::ptr;

    use super::*;

    #[test]
    fn null_arguments_are_reported() {
        let mut out = ptr::null_mut();
        let s = unsafe { slpm_instance_parse_combined(ptr::null(), &mut out) };
        assert_eq!(s, SlpmStatus::NullArgument);
        let msg = unsafe { CStr::from_ptr(slpm_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("null"));
        assert_eq!(unsafe { slpm_instance_n(ptr::null()) }, 0);
        let v = unsafe { CStr::from_ptr(slpm_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
