use std::ffi::CStr;
use std::ptr;

use nmat_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(nmat_last_error()) }.to_string_lossy().into_owned()
}

fn gaussian(k: f64) -> *mut NmatPotential {
    let (re, im) = ([k], [0.0]);
    let mut pot = ptr::null_mut();
    let st = unsafe { nmat_potential_new_power(1.0, 1.0, re.as_ptr(), im.as_ptr(), 1, 0.0, &mut pot) };
    assert_eq!(st, NmatStatus::Ok);
    pot
}

#[test]
fn solve_shifted_disk_through_handles() {
    let pot = gaussian(0.2);
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { nmat_boundary_solve(pot, 0, 0.0, &mut b) }, NmatStatus::Ok);
    assert!((unsafe { nmat_boundary_a(b) } - 1.0).abs() < 1e-10);
    assert!((unsafe { nmat_boundary_conformal_radius(b) } - 1.0).abs() < 1e-10);

    let mut len = 0usize;
    let st = unsafe { nmat_boundary_curve(b, ptr::null_mut(), ptr::null_mut(), 0, &mut len) };
    assert_eq!(st, NmatStatus::BufferTooSmall);
    assert_eq!(len, 1024);
    let (mut xs, mut ys) = (vec![0.0; len], vec![0.0; len]);
    assert_eq!(unsafe { nmat_boundary_curve(b, xs.as_mut_ptr(), ys.as_mut_ptr(), len, &mut len) }, NmatStatus::Ok);
    for (x, y) in xs.iter().zip(&ys) {
        assert!((((x - 0.2).powi(2) + y * y).sqrt() - 1.0).abs() < 1e-8);
    }
    unsafe {
        nmat_boundary_free(b);
        nmat_potential_free(pot);
    }
}

#[test]
fn error_codes() {
    let mut pot = ptr::null_mut();
    let st = unsafe { nmat_potential_new_power(-1.0, 1.0, ptr::null(), ptr::null(), 0, 0.0, &mut pot) };
    assert_eq!(st, NmatStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    assert!(pot.is_null());

    let st = unsafe { nmat_potential_new_power(1.0, 1.0, ptr::null(), ptr::null(), 2, 0.0, &mut pot) };
    assert_eq!(st, NmatStatus::NullPointer);

    let pot = gaussian(5.0);
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { nmat_boundary_solve(pot, 0, 0.0, &mut b) }, NmatStatus::Breakdown);
    assert!(last_error().contains("breakdown") || last_error().contains("θ"));
    assert!(b.is_null());
    assert_eq!(unsafe { nmat_boundary_solve(ptr::null(), 0, 0.0, &mut b) }, NmatStatus::NullPointer);
    assert!(unsafe { nmat_boundary_a(ptr::null()) }.is_nan());

    let (mut a, mut beta) = (0.0, 0.0);
    assert_eq!(unsafe { nmat_closed_form_power(1.0, 1.0, 5.0, &mut a, &mut beta) }, NmatStatus::Breakdown);
    unsafe {
        nmat_potential_free(pot);
        nmat_potential_free(ptr::null_mut());
        nmat_boundary_free(ptr::null_mut());
        nmat_chain_free(ptr::null_mut());
    }
}

#[test]
fn closed_form() {
    let (mut a, mut beta) = (0.0, 0.0);
    assert_eq!(unsafe { nmat_closed_form_power(1.0, 1.0, 0.2, &mut a, &mut beta) }, NmatStatus::Ok);
    assert!((a - 1.0).abs() < 1e-12 && (beta - 0.2).abs() < 1e-12);
}

#[test]
fn generalized_potential_and_chain() {
    let alphas = [0.0, 0.0];
    let mut pot = ptr::null_mut();
    let st =
        unsafe { nmat_potential_new_generalized(alphas.as_ptr(), 2, 1.0, ptr::null(), ptr::null(), 0, 0.0, &mut pot) };
    assert_eq!(st, NmatStatus::Ok);
    let run = |seed: u64| {
        let mut ch = ptr::null_mut();
        assert_eq!(unsafe { nmat_chain_new(pot, 6, seed, 0, 50, 1, &mut ch) }, NmatStatus::Ok);
        assert_eq!(unsafe { nmat_chain_sweep(ch, 200) }, NmatStatus::Ok);
        let mut len = 0usize;
        let (mut xs, mut ys) = (vec![0.0; 6], vec![0.0; 6]);
        assert_eq!(unsafe { nmat_chain_positions(ch, xs.as_mut_ptr(), ys.as_mut_ptr(), 6, &mut len) }, NmatStatus::Ok);
        assert_eq!(len, 6);
        let acc = unsafe { nmat_chain_acceptance(ch) };
        assert!(acc > 0.0 && acc <= 1.0);
        unsafe { nmat_chain_free(ch) };
        (xs, ys)
    };
    assert_eq!(run(9), run(9));
    assert_ne!(run(9), run(10));
    let mut ch = ptr::null_mut();
    assert_eq!(unsafe { nmat_chain_new(pot, 0, 1, 0, 0, 0, &mut ch) }, NmatStatus::InvalidArgument);
    unsafe { nmat_potential_free(pot) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/nmat.h")).unwrap();
    for name in [
        "nmat_last_error",
        "nmat_potential_new_power",
        "nmat_potential_new_generalized",
        "nmat_potential_free",
        "nmat_boundary_solve",
        "nmat_boundary_a",
        "nmat_boundary_conformal_radius",
        "nmat_boundary_curve",
        "nmat_boundary_free",
        "nmat_closed_form_power",
        "nmat_chain_new",
        "nmat_chain_sweep",
        "nmat_chain_positions",
        "nmat_chain_acceptance",
        "nmat_chain_free",
        "NMAT_STATUS_BREAKDOWN",
    ] {
        assert!(header.contains(name), "{name} missing from nmat.h");
    }
}
