//! C interface to `periodic-susy`.
//!
//! Objects are opaque handles created by `*_new` functions and released by
//! the matching `*_free`. Every fallible function returns a [`PsusyStatus`];
//! on failure a message is kept per thread and can be read with
//! [`psusy_last_error_message`]. Exact rationals cross the boundary as
//! `"p/q"` strings, approximate values as `double`.
//!
//! Text outputs follow one convention: the caller passes a buffer and its
//! capacity, `needed` receives the length including the terminating NUL,
//! and [`PsusyStatus::BufferTooSmall`] is returned when it does not fit.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use periodic_susy::exactnum::{format_rational, from_f64, int, parse_rational, to_f64};
use periodic_susy::hierarchy::{build_eigenstate, energy_level, global_norm, StateEvaluator};
use periodic_susy::polyfactory::laguerre_series;
use periodic_susy::{Error, HierarchySpec, QuasiState, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsusyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnsupportedPeriod = 3,
    SingularPoint = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

/// A validated hierarchy: gaps, ground energy and center.
pub struct PsusyHierarchy {
    spec: HierarchySpec,
}

/// An exact eigenstate together with the hierarchy it belongs to.
pub struct PsusyState {
    spec: HierarchySpec,
    state: QuasiState,
    eval: StateEvaluator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let mut bytes = msg.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> PsusyStatus {
    set_error(err.to_string());
    match err {
        Error::UnsupportedPeriod(_) => PsusyStatus::UnsupportedPeriod,
        Error::SingularPoint(_) => PsusyStatus::SingularPoint,
        Error::Convergence(_) => PsusyStatus::Internal,
        _ => PsusyStatus::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), PsusyStatus>) -> PsusyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PsusyStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            PsusyStatus::Internal
        }
    }
}

fn check<T>(r: periodic_susy::Result<T>) -> Result<T, PsusyStatus> {
    r.map_err(|e| status_of(&e))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), PsusyStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        Err(PsusyStatus::NullPointer)
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, PsusyStatus> {
    non_null(p, name)?;
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{name} is not valid UTF-8"));
        PsusyStatus::InvalidArgument
    })
}

unsafe fn read_rational(p: *const c_char, name: &str, default: Rational) -> Result<Rational, PsusyStatus> {
    if p.is_null() {
        return Ok(default);
    }
    check(parse_rational(read_str(p, name)?))
}

unsafe fn write_text(text: &str, buf: *mut c_char, capacity: usize, needed: *mut usize) -> Result<(), PsusyStatus> {
    let len = text.len() + 1;
    if !needed.is_null() {
        *needed = len;
    }
    if buf.is_null() || capacity < len {
        set_error(format!("buffer of {capacity} bytes is too small, {len} needed"));
        return Err(PsusyStatus::BufferTooSmall);
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

unsafe fn write_doubles(values: &[f64], buf: *mut f64, capacity: usize, count: *mut usize) -> Result<(), PsusyStatus> {
    if !count.is_null() {
        *count = values.len();
    }
    if values.is_empty() {
        return Ok(());
    }
    if buf.is_null() || capacity < values.len() {
        set_error(format!("buffer of {capacity} doubles is too small, {} needed", values.len()));
        return Err(PsusyStatus::BufferTooSmall);
    }
    std::ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

/// Copies the calling thread's last error message into `buf`.
///
/// # Safety
/// `buf` must be null or point to `capacity` writable bytes; `needed` must
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_last_error_message(buf: *mut c_char, capacity: usize, needed: *mut usize) -> PsusyStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().to_string_lossy().into_owned());
    match write_text(&msg, buf, capacity, needed) {
        Ok(()) => PsusyStatus::Ok,
        Err(s) => s,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn psusy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a hierarchy from comma-separated rational gaps such as
/// `"1,5/2"`. `e0` and `u0` may be null for zero.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_hierarchy_new(
    gaps: *const c_char,
    e0: *const c_char,
    u0: *const c_char,
    out: *mut *mut PsusyHierarchy,
) -> PsusyStatus {
    guard(|| {
        non_null(out, "out")?;
        let gaps = read_str(gaps, "gaps")?
            .split(',')
            .map(parse_rational)
            .collect::<periodic_susy::Result<Vec<_>>>();
        let gaps = check(gaps)?;
        let e0 = read_rational(e0, "e0", int(0))?;
        let u0 = read_rational(u0, "u0", int(0))?;
        let spec = check(HierarchySpec::new(gaps, e0, u0))?;
        *out = Box::into_raw(Box::new(PsusyHierarchy { spec }));
        Ok(())
    })
}

/// Creates a hierarchy from `count` double gaps, each converted exactly.
///
/// # Safety
/// `gaps` must point to `count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_hierarchy_new_f64(
    gaps: *const f64,
    count: usize,
    e0: f64,
    u0: f64,
    out: *mut *mut PsusyHierarchy,
) -> PsusyStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(gaps, "gaps")?;
        let exact = |x: f64| {
            from_f64(x).ok_or_else(|| {
                set_error(format!("non-finite value {x}"));
                PsusyStatus::InvalidArgument
            })
        };
        let gaps = std::slice::from_raw_parts(gaps, count).iter().map(|&g| exact(g)).collect::<Result<Vec<_>, _>>()?;
        let spec = check(HierarchySpec::new(gaps, exact(e0)?, exact(u0)?))?;
        *out = Box::into_raw(Box::new(PsusyHierarchy { spec }));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from `psusy_hierarchy_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn psusy_hierarchy_free(h: *mut PsusyHierarchy) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live hierarchy handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_hierarchy_period(h: *const PsusyHierarchy, out: *mut usize) -> PsusyStatus {
    guard(|| {
        non_null(h, "hierarchy")?;
        non_null(out, "out")?;
        *out = (*h).spec.period();
        Ok(())
    })
}

fn alpha_of(spec: &HierarchySpec) -> Result<Rational, PsusyStatus> {
    match spec.period() {
        1 => Ok(int(0)),
        2 => Ok(spec.alpha()),
        n => Err(status_of(&Error::UnsupportedPeriod(n))),
    }
}

/// Asymmetry `α = (Δ₂ - Δ₁)/(2(Δ₁ + Δ₂))`; zero for one gap.
///
/// # Safety
/// `h` must be a live hierarchy handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_hierarchy_alpha(h: *const PsusyHierarchy, out: *mut f64) -> PsusyStatus {
    guard(|| {
        non_null(h, "hierarchy")?;
        non_null(out, "out")?;
        *out = to_f64(&alpha_of(&(*h).spec)?);
        Ok(())
    })
}

/// `α` as exact `"p/q"` text.
///
/// # Safety
/// `h` must be a live hierarchy handle; see the module notes for buffers.
#[no_mangle]
pub unsafe extern "C" fn psusy_hierarchy_alpha_text(
    h: *const PsusyHierarchy,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> PsusyStatus {
    guard(|| {
        non_null(h, "hierarchy")?;
        write_text(&format_rational(&alpha_of(&(*h).spec)?), buf, capacity, needed)
    })
}

/// Normalization constant `N₀` shared by all states.
///
/// # Safety
/// `h` must be a live hierarchy handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_hierarchy_global_norm(h: *const PsusyHierarchy, out: *mut f64) -> PsusyStatus {
    guard(|| {
        non_null(h, "hierarchy")?;
        non_null(out, "out")?;
        alpha_of(&(*h).spec)?;
        *out = global_norm(&(*h).spec);
        Ok(())
    })
}

fn check_level(level: usize) -> Result<usize, PsusyStatus> {
    if level == 0 {
        set_error("levels are numbered from 1");
        return Err(PsusyStatus::InvalidArgument);
    }
    Ok(level)
}

/// `E_{λ,n}`, the `n`-th energy of the `λ`-th Hamiltonian (`λ ≥ 1`).
///
/// # Safety
/// `h` must be a live hierarchy handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_energy(h: *const PsusyHierarchy, level: usize, n: usize, out: *mut f64) -> PsusyStatus {
    guard(|| {
        non_null(h, "hierarchy")?;
        non_null(out, "out")?;
        let level = check_level(level)?;
        *out = to_f64(&energy_level(&(*h).spec, level, n));
        Ok(())
    })
}

/// `E_{λ,n}` as exact `"p/q"` text.
///
/// # Safety
/// `h` must be a live hierarchy handle; see the module notes for buffers.
#[no_mangle]
pub unsafe extern "C" fn psusy_energy_text(
    h: *const PsusyHierarchy,
    level: usize,
    n: usize,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> PsusyStatus {
    guard(|| {
        non_null(h, "hierarchy")?;
        let level = check_level(level)?;
        write_text(&format_rational(&energy_level(&(*h).spec, level, n)), buf, capacity, needed)
    })
}

/// Builds `ψ_{λ,n}` exactly. Only one- and two-gap hierarchies have closed
/// forms.
///
/// # Safety
/// `h` must be a live hierarchy handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_eigenstate_new(
    h: *const PsusyHierarchy,
    level: usize,
    n: usize,
    out: *mut *mut PsusyState,
) -> PsusyStatus {
    guard(|| {
        non_null(h, "hierarchy")?;
        non_null(out, "out")?;
        let level = check_level(level)?;
        let spec = (*h).spec.clone();
        let state = check(build_eigenstate(&spec, level, n))?;
        let eval = StateEvaluator::new(&state, &spec);
        *out = Box::into_raw(Box::new(PsusyState { spec, state, eval }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from `psusy_eigenstate_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn psusy_eigenstate_free(s: *mut PsusyState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Normalized `ψ(u)`. Returns [`PsusyStatus::SingularPoint`] at a
/// divergent center.
///
/// # Safety
/// `s` must be a live state handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_eigenstate_eval(s: *const PsusyState, u: f64, out: *mut f64) -> PsusyStatus {
    guard(|| {
        non_null(s, "state")?;
        non_null(out, "out")?;
        *out = check((*s).eval.eval(u))?;
        Ok(())
    })
}

/// Evaluates `ψ` at `count` points.
///
/// # Safety
/// `s` must be a live state handle; `u` and `out` must each hold `count`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn psusy_eigenstate_eval_many(
    s: *const PsusyState,
    u: *const f64,
    count: usize,
    out: *mut f64,
) -> PsusyStatus {
    guard(|| {
        non_null(s, "state")?;
        if count == 0 {
            return Ok(());
        }
        non_null(u, "u")?;
        non_null(out, "out")?;
        let us = std::slice::from_raw_parts(u, count);
        let vals = std::slice::from_raw_parts_mut(out, count);
        for (v, &x) in vals.iter_mut().zip(us) {
            *v = check((*s).eval.eval(x))?;
        }
        Ok(())
    })
}

/// The exponent `σ` of the prefactor `v^σ` (zero for Gaussian-form states).
///
/// # Safety
/// `s` must be a live state handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_eigenstate_sigma(s: *const PsusyState, out: *mut f64) -> PsusyStatus {
    guard(|| {
        non_null(s, "state")?;
        non_null(out, "out")?;
        *out = to_f64(&(*s).state.sigma);
        Ok(())
    })
}

/// Squared amplitude of the state relative to `N₀²`.
///
/// # Safety
/// `s` must be a live state handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_eigenstate_norm2(s: *const PsusyState, out: *mut f64) -> PsusyStatus {
    guard(|| {
        non_null(s, "state")?;
        non_null(out, "out")?;
        *out = (*s).state.norm2.to_f64();
        Ok(())
    })
}

/// Coefficients of the polynomial factor, constant term first, as doubles.
/// `count` receives the number of coefficients.
///
/// # Safety
/// `s` must be a live state handle; `buf` must be null or hold `capacity`
/// doubles; `count` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_eigenstate_coefficients(
    s: *const PsusyState,
    buf: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> PsusyStatus {
    guard(|| {
        non_null(s, "state")?;
        let values: Vec<f64> = (*s).state.poly.coeffs().iter().map(to_f64).collect();
        write_doubles(&values, buf, capacity, count)
    })
}

/// The hierarchy a state belongs to, as a new handle the caller must free.
///
/// # Safety
/// `s` must be a live state handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_eigenstate_hierarchy(s: *const PsusyState, out: *mut *mut PsusyHierarchy) -> PsusyStatus {
    guard(|| {
        non_null(s, "state")?;
        non_null(out, "out")?;
        *out = Box::into_raw(Box::new(PsusyHierarchy { spec: (*s).spec.clone() }));
        Ok(())
    })
}

fn coeff_text(coeffs: &[Rational]) -> String {
    coeffs.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

/// Coefficients of `L^{(γ)}_p` as doubles, constant term first. `gamma` is
/// rational text such as `"-1/4"`.
///
/// # Safety
/// `gamma` must be NUL-terminated; `buf` must be null or hold `capacity`
/// doubles; `count` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn psusy_laguerre_coefficients(
    gamma: *const c_char,
    p: usize,
    buf: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> PsusyStatus {
    guard(|| {
        let gamma = check(parse_rational(read_str(gamma, "gamma")?))?;
        let values: Vec<f64> = laguerre_series(&gamma, p).coeffs().iter().map(to_f64).collect();
        write_doubles(&values, buf, capacity, count)
    })
}

/// Coefficients of `L^{(γ)}_p` as space-separated `"p/q"` text.
///
/// # Safety
/// `gamma` must be NUL-terminated; see the module notes for buffers.
#[no_mangle]
pub unsafe extern "C" fn psusy_laguerre_coefficients_text(
    gamma: *const c_char,
    p: usize,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> PsusyStatus {
    guard(|| {
        let gamma = check(parse_rational(read_str(gamma, "gamma")?))?;
        write_text(&coeff_text(laguerre_series(&gamma, p).coeffs()), buf, capacity, needed)
    })
}
