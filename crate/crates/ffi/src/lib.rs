//! C interface to `mvcirc`.
//!
//! Algebras and circuits are opaque handles created by the `*_parse` and
//! `mv_algebra_zoo` functions and released with the matching `*_free`.
//! Every fallible call returns an [`MvStatus`]; on failure
//! [`mv_last_error`] describes the problem. Strings handed out by the
//! library must be released with [`mv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mvcirc::circuit::{parse_circuit, Circuit, Instance};
use mvcirc::solvers::{dispatch_with, SolveOptions, DEFAULT_BUDGET};
use mvcirc::structure::{classify, Problem};
use mvcirc::{zoo, Error, FiniteAlgebra};

/// Opaque algebra handle.
pub struct MvAlgebra {
    inner: FiniteAlgebra,
}

/// Opaque circuit handle, bound to the algebra it was parsed against.
pub struct MvCircuit {
    inner: Circuit,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotFound = 4,
    Precondition = 5,
    Budget = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvProblem {
    Csat = 0,
    Mcsat = 1,
    Scsat = 2,
    Ceqv = 3,
}

impl From<MvProblem> for Problem {
    fn from(p: MvProblem) -> Problem {
        match p {
            MvProblem::Csat => Problem::Csat,
            MvProblem::Mcsat => Problem::Mcsat,
            MvProblem::Scsat => Problem::Scsat,
            MvProblem::Ceqv => Problem::Ceqv,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(MvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if e.is_budget() {
            MvStatus::Budget
        } else {
            match e {
                Error::Parse { .. }
                | Error::ForwardReference { .. }
                | Error::ArityMismatch { .. }
                | Error::UnknownOp(_)
                | Error::InvalidAlgebra(_)
                | Error::ElementOutOfRange { .. }
                | Error::InstanceShape(_) => MvStatus::Parse,
                _ => MvStatus::Precondition,
            }
        };
        Fail(status, e.to_string())
    }
}

/// Runs `f`, recording any failure or panic as the last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MvStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            MvStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(MvStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(MvStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(MvStatus::NullPointer, format!("{what} is null")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the most recent failure on this thread; empty after a
/// success. Valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn mv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an algebra in the text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mv_algebra_parse(text: *const c_char, out: *mut *mut MvAlgebra) -> MvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let alg = FiniteAlgebra::parse(str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(MvAlgebra { inner: alg }));
        Ok(())
    })
}

/// Looks up a built-in fixture by name.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mv_algebra_zoo(name: *const c_char, out: *mut *mut MvAlgebra) -> MvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let name = str_arg(name, "name")?;
        let e = zoo::lookup(name).ok_or_else(|| Fail(MvStatus::NotFound, format!("no zoo entry `{name}`")))?;
        *out = Box::into_raw(Box::new(MvAlgebra { inner: e.algebra }));
        Ok(())
    })
}

/// # Safety
/// `alg` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mv_algebra_free(alg: *mut MvAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Universe size, or 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mv_algebra_size(alg: *const MvAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.inner.size())
}

/// The classification report as JSON.
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mv_classify_json(alg: *const MvAlgebra, out: *mut *mut c_char) -> MvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let r = classify(&ref_arg(alg, "alg")?.inner)?;
        *out = c_string(r.to_json());
        Ok(())
    })
}

/// Parses a circuit over `alg`.
///
/// # Safety
/// `alg` must be a live handle, `text` nul-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mv_circuit_parse(
    alg: *const MvAlgebra,
    text: *const c_char,
    out: *mut *mut MvCircuit,
) -> MvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let c = parse_circuit(&ref_arg(alg, "alg")?.inner, str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(MvCircuit { inner: c }));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mv_circuit_free(c: *mut MvCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Decides `problem` for the circuit with the automatically chosen solver
/// and writes the result as JSON. A `budget` of 0 means the default.
///
/// # Safety
/// `alg` and `circuit` must be live handles, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mv_solve(
    alg: *const MvAlgebra,
    circuit: *const MvCircuit,
    problem: MvProblem,
    budget: u64,
    out: *mut *mut c_char,
) -> MvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let alg = &ref_arg(alg, "alg")?.inner;
        let c = &ref_arg(circuit, "circuit")?.inner;
        if c.algebra_name() != alg.name() {
            return Err(Fail(
                MvStatus::Precondition,
                format!("circuit was parsed over `{}`, not `{}`", c.algebra_name(), alg.name()),
            ));
        }
        let inst = Instance::new(problem.into(), c.clone())?;
        let opts = SolveOptions {
            budget: if budget == 0 { DEFAULT_BUDGET } else { budget },
            threads: 1,
        };
        let r = dispatch_with(alg, &inst, opts)?;
        *out = c_string(r.to_json().to_string());
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
