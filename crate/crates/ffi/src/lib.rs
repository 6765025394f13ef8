//! C ABI over `sml-core`.
//!
//! Every entry point returns an [`SmlStatus`]; results go through out
//! pointers. On failure the message is kept in a thread-local buffer and can
//! be copied out with [`sml_last_error_message`]. Panics never cross the
//! boundary: they are reported as `SML_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use sml_core::error::SmlError;
use sml_core::exponent_regions::{classify, Verdict};
use sml_core::quadrature::QuadratureSpec;
use sml_core::radial_fourier::{multiplier_m, sphere_fourier, MeansSpec};
use sml_core::scaling_lab::{run_scaling, Quantity, ScalingFit};
use sml_core::special_functions::bessel_j;
use sml_core::spherical_means::mean_multiplier_route;
use sml_core::test_function::{f_lambda, TestFunctionSpec};

/// Status codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmlStatus {
    Ok = 0,
    Pole = 1,
    Domain = 2,
    NonConvergence = 3,
    InvalidInput = 4,
    MissingParameter = 5,
    FitRejected = 6,
    Io = 7,
    NullPointer = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmlVerdict {
    SufficientKnown = 0,
    NecessaryViolated = 1,
    Open = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmlQuantity {
    TestfnLpNorm = 0,
    MeanAtOrigin = 1,
    MeanTunedFar = 2,
    MeanLpNearOrigin = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmlComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for SmlComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Opaque handle: dimension, α and the quadrature settings.
pub struct SmlMeans {
    spec: MeansSpec,
    quad: QuadratureSpec,
}

/// Opaque handle holding a completed log-log fit.
pub struct SmlFit {
    fit: ScalingFit,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &SmlError) -> SmlStatus {
    match e {
        SmlError::Pole(_) => SmlStatus::Pole,
        SmlError::Domain(_) => SmlStatus::Domain,
        SmlError::NonConvergence(_) => SmlStatus::NonConvergence,
        SmlError::InvalidInput(_) => SmlStatus::InvalidInput,
        SmlError::MissingParameter(_) => SmlStatus::MissingParameter,
        SmlError::FitRejected(_) => SmlStatus::FitRejected,
        SmlError::Io(_) => SmlStatus::Io,
    }
}

enum Failure {
    Core(SmlError),
    Null(&'static str),
}

impl From<SmlError> for Failure {
    fn from(e: SmlError) -> Self {
        Failure::Core(e)
    }
}

/// Runs `body`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> SmlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SmlStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SmlStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic".into());
            SmlStatus::Panic
        }
    }
}

fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null and, per the API contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn deref<'a, T>(ptr: *const T, what: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: caller passes either null or a pointer obtained from this library.
    unsafe { ptr.as_ref() }.ok_or(Failure::Null(what))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn sml_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// J_β(r) for complex order β and r ≥ 0.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_bessel_j(order_re: f64, order_im: f64, r: f64, out: *mut SmlComplex) -> SmlStatus {
    guard(|| write(out, bessel_j(Complex64::new(order_re, order_im), r)?.into(), "out"))
}

/// Fourier transform ϑ(s) of the surface measure on the unit sphere in R^n.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_theta(n: u32, s: f64, out: *mut f64) -> SmlStatus {
    guard(|| write(out, sphere_fourier(n, s)?.re, "out"))
}

/// Creates a handle for dimension `n` and order α. Uses the default
/// quadrature settings unless `sweep` is nonzero.
///
/// # Safety
/// `out` must be valid for writes. Release the handle with [`sml_means_free`].
#[no_mangle]
pub unsafe extern "C" fn sml_means_new(
    n: u32,
    alpha_re: f64,
    alpha_im: f64,
    sweep: c_int,
    out: *mut *mut SmlMeans,
) -> SmlStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let spec = MeansSpec::new(Complex64::new(alpha_re, alpha_im), n)?;
        let quad = if sweep != 0 { QuadratureSpec::sweep() } else { QuadratureSpec::default() };
        write(out, Box::into_raw(Box::new(SmlMeans { spec, quad })), "out")
    })
}

/// # Safety
/// `handle` must be null or come from [`sml_means_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sml_means_free(handle: *mut SmlMeans) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// The radial multiplier m^α(s).
///
/// # Safety
/// `handle` from [`sml_means_new`]; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_multiplier(handle: *const SmlMeans, s: f64, out: *mut SmlComplex) -> SmlStatus {
    guard(|| {
        let h = deref(handle, "handle")?;
        write(out, multiplier_m(&h.spec, s)?.into(), "out")
    })
}

/// The test function f_λ at distance `radius` from the origin.
///
/// # Safety
/// `handle` from [`sml_means_new`]; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_testfn(
    handle: *const SmlMeans,
    lambda: f64,
    radius: f64,
    out: *mut SmlComplex,
) -> SmlStatus {
    guard(|| {
        let h = deref(handle, "handle")?;
        let tf = TestFunctionSpec::new(h.spec, lambda)?;
        write(out, f_lambda(&tf, radius, &h.quad)?.into(), "out")
    })
}

/// The mean A_t^α f_λ at distance `radius` from the origin.
///
/// # Safety
/// `handle` from [`sml_means_new`]; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_mean(
    handle: *const SmlMeans,
    lambda: f64,
    t: f64,
    radius: f64,
    out: *mut SmlComplex,
) -> SmlStatus {
    guard(|| {
        let h = deref(handle, "handle")?;
        let tf = TestFunctionSpec::new(h.spec, lambda)?;
        write(out, mean_multiplier_route(&h.spec, t, &tf, radius, &h.quad)?.into(), "out")
    })
}

/// Classifies the point (p, Re α) in dimension `n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sml_classify(n: u32, p: f64, re_alpha: f64, out: *mut SmlVerdict) -> SmlStatus {
    guard(|| {
        let v = match classify(n, p, re_alpha)?.verdict {
            Verdict::SufficientKnown => SmlVerdict::SufficientKnown,
            Verdict::NecessaryViolated => SmlVerdict::NecessaryViolated,
            Verdict::Open => SmlVerdict::Open,
        };
        write(out, v, "out")
    })
}

/// Measures `quantity` (an `SmlQuantity` value) at each λ in `lambdas` and
/// fits a power law.
/// `p` is ignored for quantities that do not take one; pass NaN to omit it.
///
/// # Safety
/// `handle` from [`sml_means_new`]; `lambdas` valid for `len` reads;
/// `out` valid for writes. Release the fit with [`sml_fit_free`].
#[no_mangle]
pub unsafe extern "C" fn sml_fit_run(
    handle: *const SmlMeans,
    quantity: u32,
    p: f64,
    lambdas: *const f64,
    len: usize,
    out: *mut *mut SmlFit,
) -> SmlStatus {
    guard(|| {
        let h = deref(handle, "handle")?;
        if lambdas.is_null() {
            return Err(Failure::Null("lambdas"));
        }
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let grid = std::slice::from_raw_parts(lambdas, len);
        // Taken as an integer: an out-of-range enum value from C would be UB.
        let q = match quantity {
            x if x == SmlQuantity::TestfnLpNorm as u32 => Quantity::TestfnLpNorm,
            x if x == SmlQuantity::MeanAtOrigin as u32 => Quantity::MeanAtOrigin,
            x if x == SmlQuantity::MeanTunedFar as u32 => Quantity::MeanTunedFar,
            x if x == SmlQuantity::MeanLpNearOrigin as u32 => Quantity::MeanLpNearOrigin,
            x => return Err(SmlError::InvalidInput(format!("unknown quantity {x}")).into()),
        };
        let p = (!p.is_nan() && q.needs_p()).then_some(p);
        let fit = run_scaling(q, &h.spec, p, grid, &h.quad)?;
        write(out, Box::into_raw(Box::new(SmlFit { fit })), "out")
    })
}

/// # Safety
/// `fit` must be null or come from [`sml_fit_run`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sml_fit_free(fit: *mut SmlFit) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}

/// Fitted exponent; NaN for a null handle.
///
/// # Safety
/// `fit` must be null or come from [`sml_fit_run`].
#[no_mangle]
pub unsafe extern "C" fn sml_fit_slope(fit: *const SmlFit) -> f64 {
    fit.as_ref().map_or(f64::NAN, |f| f.fit.slope)
}

/// Exponent predicted by the analysis; NaN for a null handle.
///
/// # Safety
/// `fit` must be null or come from [`sml_fit_run`].
#[no_mangle]
pub unsafe extern "C" fn sml_fit_predicted(fit: *const SmlFit) -> f64 {
    fit.as_ref().map_or(f64::NAN, |f| f.fit.predicted)
}

/// # Safety
/// `fit` must be null or come from [`sml_fit_run`].
#[no_mangle]
pub unsafe extern "C" fn sml_fit_r_squared(fit: *const SmlFit) -> f64 {
    fit.as_ref().map_or(f64::NAN, |f| f.fit.r_squared)
}
