//! C ABI over `nmat-core`.
//!
//! Objects are opaque heap handles released with the matching `*_free`.
//! Every fallible call returns an [`NmatStatus`]; on failure a message is
//! available from [`nmat_last_error`] on the same thread until the next
//! failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nmat_core::boundary::{self, BoundaryError, BoundarySolution, SolveOptions};
use nmat_core::gas::{ChainSpec, EigenConfiguration, GasError, Model};
use nmat_core::potential::{Potential, PotentialError, RadialProfile};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// θ lost positivity: the droplet is no longer simply connected.
    Breakdown = 3,
    NoConvergence = 4,
    /// The output buffer was too short; the required length was written.
    BufferTooSmall = 5,
    Internal = 6,
}

pub struct NmatPotential(Potential);

pub struct NmatBoundary(BoundarySolution);

pub struct NmatChain(EigenConfiguration);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: NmatStatus, msg: impl ToString) -> NmatStatus {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
    status
}

fn guard<F: FnOnce() -> NmatStatus>(f: F) -> NmatStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(NmatStatus::Internal, "panic inside nmat"))
}

fn from_potential(e: PotentialError) -> NmatStatus {
    fail(NmatStatus::InvalidArgument, e)
}

fn from_boundary(e: BoundaryError) -> NmatStatus {
    let status = if e.is_breakdown() {
        NmatStatus::Breakdown
    } else {
        match e {
            BoundaryError::NoConvergence { .. } => NmatStatus::NoConvergence,
            BoundaryError::InvalidArgument(_) | BoundaryError::Potential(_) => NmatStatus::InvalidArgument,
            _ => NmatStatus::Internal,
        }
    };
    fail(status, e)
}

fn from_gas(e: GasError) -> NmatStatus {
    let status = match e {
        GasError::InvalidArgument(_) | GasError::Potential(_) => NmatStatus::InvalidArgument,
        _ => NmatStatus::Internal,
    };
    fail(status, e)
}

/// Message of the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nmat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `re` and `im` must each point to `degree` readable doubles when
/// `degree > 0`.
unsafe fn read_poly(re: *const f64, im: *const f64, degree: usize) -> Option<Vec<Complex64>> {
    if degree == 0 {
        return Some(Vec::new());
    }
    if re.is_null() || im.is_null() {
        return None;
    }
    let (re, im) = (std::slice::from_raw_parts(re, degree), std::slice::from_raw_parts(im, degree));
    Some(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

/// # Safety
/// `out` must be writable; see [`read_poly`] for the coefficient arrays.
unsafe fn new_potential(
    radial: Result<RadialProfile, PotentialError>,
    poly_re: *const f64,
    poly_im: *const f64,
    degree: usize,
    domain_radius: f64,
    out: *mut *mut NmatPotential,
) -> NmatStatus {
    if out.is_null() {
        return fail(NmatStatus::NullPointer, "out is null");
    }
    let Some(poly) = read_poly(poly_re, poly_im, degree) else {
        return fail(NmatStatus::NullPointer, "coefficient array is null");
    };
    let radial = match radial {
        Ok(r) => r,
        Err(e) => return from_potential(e),
    };
    let pot = if domain_radius > 0.0 {
        Potential::new(radial, poly, domain_radius)
    } else {
        Potential::with_default_domain(radial, poly)
    };
    match pot {
        Ok(p) => {
            *out = Box::into_raw(Box::new(NmatPotential(p)));
            NmatStatus::Ok
        }
        Err(e) => from_potential(e),
    }
}

/// `W(z) = C|z|^{2b} − 2Re P(z)` with `P(z) = Σ_{k=1}^{degree} p_k z^k`,
/// `p_k = poly_re[k−1] + i·poly_im[k−1]`. A non-positive `domain_radius`
/// selects the default.
///
/// # Safety
/// `out` must be writable; `poly_re`/`poly_im` must hold `degree` doubles.
#[no_mangle]
pub unsafe extern "C" fn nmat_potential_new_power(
    c: f64,
    b: f64,
    poly_re: *const f64,
    poly_im: *const f64,
    degree: usize,
    domain_radius: f64,
    out: *mut *mut NmatPotential,
) -> NmatStatus {
    guard(|| new_potential(RadialProfile::power(c, b), poly_re, poly_im, degree, domain_radius, out))
}

/// Generalized profile from `m` block parameters `alphas`.
///
/// # Safety
/// As [`nmat_potential_new_power`]; `alphas` must hold `m` doubles.
#[no_mangle]
pub unsafe extern "C" fn nmat_potential_new_generalized(
    alphas: *const f64,
    m: usize,
    coupling: f64,
    poly_re: *const f64,
    poly_im: *const f64,
    degree: usize,
    domain_radius: f64,
    out: *mut *mut NmatPotential,
) -> NmatStatus {
    guard(|| {
        if alphas.is_null() && m > 0 {
            return fail(NmatStatus::NullPointer, "alphas is null");
        }
        let al = if m == 0 { Vec::new() } else { std::slice::from_raw_parts(alphas, m).to_vec() };
        new_potential(RadialProfile::generalized(al, coupling), poly_re, poly_im, degree, domain_radius, out)
    })
}

/// # Safety
/// `pot` must come from a `nmat_potential_new_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nmat_potential_free(pot: *mut NmatPotential) {
    if !pot.is_null() {
        drop(Box::from_raw(pot));
    }
}

/// Solves for the droplet. `grid_size = 0` and `tol <= 0` select defaults.
///
/// # Safety
/// `pot` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nmat_boundary_solve(
    pot: *const NmatPotential,
    grid_size: usize,
    tol: f64,
    out: *mut *mut NmatBoundary,
) -> NmatStatus {
    guard(|| {
        if pot.is_null() || out.is_null() {
            return fail(NmatStatus::NullPointer, "null handle");
        }
        let mut opts = SolveOptions::default();
        if grid_size > 0 {
            opts.grid_size = grid_size;
        }
        if tol > 0.0 {
            opts.tol = tol;
        }
        match boundary::solve(&(*pot).0, &opts) {
            Ok(sol) => {
                *out = Box::into_raw(Box::new(NmatBoundary(sol)));
                NmatStatus::Ok
            }
            Err(e) => from_boundary(e),
        }
    })
}

/// Map normalization `a`; NaN for a null handle.
///
/// # Safety
/// `b` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nmat_boundary_a(b: *const NmatBoundary) -> f64 {
    if b.is_null() {
        return f64::NAN;
    }
    (*b).0.a()
}

/// # Safety
/// `b` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nmat_boundary_conformal_radius(b: *const NmatBoundary) -> f64 {
    if b.is_null() {
        return f64::NAN;
    }
    (*b).0.conformal_radius()
}

/// # Safety
/// `xs`, `ys` must hold `capacity` doubles and `len` be writable.
unsafe fn copy_points(points: &[Complex64], xs: *mut f64, ys: *mut f64, capacity: usize, len: *mut usize) -> NmatStatus {
    if len.is_null() {
        return fail(NmatStatus::NullPointer, "len is null");
    }
    *len = points.len();
    if capacity < points.len() {
        return fail(NmatStatus::BufferTooSmall, format!("need {} points", points.len()));
    }
    if xs.is_null() || ys.is_null() {
        return fail(NmatStatus::NullPointer, "output array is null");
    }
    for (i, z) in points.iter().enumerate() {
        *xs.add(i) = z.re;
        *ys.add(i) = z.im;
    }
    NmatStatus::Ok
}

/// Copies the counterclockwise boundary polyline. `*len` receives the
/// number of points even when `capacity` is too small.
///
/// # Safety
/// `b` must be a live handle; `xs`, `ys` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn nmat_boundary_curve(
    b: *const NmatBoundary,
    xs: *mut f64,
    ys: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> NmatStatus {
    guard(|| {
        if b.is_null() {
            return fail(NmatStatus::NullPointer, "null handle");
        }
        copy_points(&(*b).0.curve, xs, ys, capacity, len)
    })
}

/// # Safety
/// `b` must come from [`nmat_boundary_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nmat_boundary_free(b: *mut NmatBoundary) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Explicit droplet for `Φ = C s^b`, `P = K z`.
///
/// # Safety
/// `a` and `beta` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nmat_closed_form_power(c: f64, b: f64, k: f64, a: *mut f64, beta: *mut f64) -> NmatStatus {
    guard(|| {
        if a.is_null() || beta.is_null() {
            return fail(NmatStatus::NullPointer, "null output");
        }
        match boundary::closed_form_power(c, b, k) {
            Ok(cf) => {
                *a = cf.a;
                *beta = cf.beta;
                NmatStatus::Ok
            }
            Err(e) => from_boundary(e),
        }
    })
}

/// Metropolis chain of `n` particles. `generalized != 0` adds the
/// generalized model's Jacobian factor. The proposal width adapts during
/// the first `burn_in` sweeps.
///
/// # Safety
/// `pot` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nmat_chain_new(
    pot: *const NmatPotential,
    n: usize,
    seed: u64,
    chain: u64,
    burn_in: u64,
    generalized: i32,
    out: *mut *mut NmatChain,
) -> NmatStatus {
    guard(|| {
        if pot.is_null() || out.is_null() {
            return fail(NmatStatus::NullPointer, "null handle");
        }
        let spec = ChainSpec {
            n,
            sweeps: u64::MAX,
            burn_in,
            thin: 1,
            seed,
            model: if generalized != 0 { Model::Generalized } else { Model::Standard },
        };
        if let Err(e) = spec.validate() {
            return from_gas(e);
        }
        match EigenConfiguration::new(&(*pot).0, &spec, chain) {
            Ok(state) => {
                *out = Box::into_raw(Box::new(NmatChain(state)));
                NmatStatus::Ok
            }
            Err(e) => from_gas(e),
        }
    })
}

/// Runs `count` sweeps.
///
/// # Safety
/// `ch` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nmat_chain_sweep(ch: *mut NmatChain, count: u64) -> NmatStatus {
    guard(|| {
        if ch.is_null() {
            return fail(NmatStatus::NullPointer, "null handle");
        }
        for _ in 0..count {
            (*ch).0.mh_sweep();
        }
        NmatStatus::Ok
    })
}

/// Copies the current eigenvalues; `*len` receives `n`.
///
/// # Safety
/// `ch` must be a live handle; `xs`, `ys` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn nmat_chain_positions(
    ch: *const NmatChain,
    xs: *mut f64,
    ys: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> NmatStatus {
    guard(|| {
        if ch.is_null() {
            return fail(NmatStatus::NullPointer, "null handle");
        }
        copy_points(&(*ch).0.z, xs, ys, capacity, len)
    })
}

/// Acceptance rate since creation; NaN for a null handle.
///
/// # Safety
/// `ch` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nmat_chain_acceptance(ch: *const NmatChain) -> f64 {
    if ch.is_null() {
        return f64::NAN;
    }
    (*ch).0.acceptance()
}

/// # Safety
/// `ch` must come from [`nmat_chain_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nmat_chain_free(ch: *mut NmatChain) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}
