use std::ffi::CStr;
use std::ptr;

use frame_qfi_ffi::*;

fn last_error() -> String {
    let p = fqfi_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn ghz(n: u32) -> *mut FqfiState {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fqfi_state_ghz(n, 0.0, &mut s) }, FqfiStatus::Ok);
    s
}

#[test]
fn ghz_handle_and_qfi() {
    let s = ghz(4);
    unsafe {
        assert_eq!(fqfi_state_dim(s), 5);
        let mut f = [0.0; 9];
        let st = fqfi_qfi_pure(s, 0.0, std::f64::consts::FRAC_PI_2, 0.0, f.as_mut_ptr());
        assert_eq!(st, FqfiStatus::Ok);
        assert!((f[0] + f[4] + f[8] - 24.0).abs() < 1e-12);
        let mut h = 0.0;
        assert_eq!(fqfi_haar_analytic(s, &mut h), FqfiStatus::Ok);
        assert!((h - 28.0).abs() < 1e-12);
        let (mut v, mut e) = (0.0, 0.0);
        assert_eq!(fqfi_haar_mc(s, 5000, 3, &mut v, &mut e), FqfiStatus::Ok);
        assert!((v - h).abs() < 5.0 * e);
        fqfi_state_free(s);
        fqfi_state_free(ptr::null_mut());
    }
}

#[test]
fn amplitudes_round_trip_and_normalize() {
    let re = [2.0, 0.0, 0.0];
    let im = [0.0, 0.0, 2.0];
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(fqfi_state_from_amplitudes(2, re.as_ptr(), im.as_ptr(), 3, &mut s), FqfiStatus::Ok);
        let (mut r, mut i) = ([0.0; 3], [0.0; 3]);
        assert_eq!(fqfi_state_amplitudes(s, r.as_mut_ptr(), i.as_mut_ptr(), 3), FqfiStatus::Ok);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r[0] - h).abs() < 1e-15 && (i[2] - h).abs() < 1e-15);
        assert_eq!(
            fqfi_state_amplitudes(s, r.as_mut_ptr(), i.as_mut_ptr(), 2),
            FqfiStatus::BufferTooSmall
        );
        fqfi_state_free(s);

        let mut s = ptr::null_mut();
        let st = fqfi_state_from_amplitudes(3, re.as_ptr(), im.as_ptr(), 3, &mut s);
        assert_eq!(st, FqfiStatus::InvalidArgument);
        assert!(s.is_null());
        assert!(last_error().contains("2j+1"));
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        assert_eq!(fqfi_state_ghz(3, 0.0, ptr::null_mut()), FqfiStatus::NullPointer);
        assert_eq!(fqfi_qfi_pure(ptr::null(), 0.0, 1.0, 0.0, ptr::null_mut()), FqfiStatus::NullPointer);
        assert_eq!(fqfi_state_dim(ptr::null()), 0);
    }
}

#[test]
fn bounds_and_domain_errors() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(fqfi_ghz_crb_trace_inverse(4, std::f64::consts::FRAC_PI_2, &mut v), FqfiStatus::Ok);
        assert!((v - 0.5625).abs() < 1e-12);
        assert_eq!(fqfi_goldberg_bound(4, std::f64::consts::FRAC_PI_2, &mut v), FqfiStatus::Ok);
        assert!((v - 0.45).abs() < 1e-12);
        assert_eq!(fqfi_ghz_crb_trace_inverse(4, 0.0, &mut v), FqfiStatus::SingularRotation);
        assert!(last_error().contains("singular rotation"));
        assert_eq!(fqfi_dephased_trace_qfi(4, 2.0, 1.0, &mut v), FqfiStatus::InvalidArgument);
        assert_eq!(fqfi_dephased_trace_qfi(4, 1.0, std::f64::consts::FRAC_PI_2, &mut v), FqfiStatus::Ok);
        assert!((v - 24.0).abs() < 1e-12);
        assert_eq!(fqfi_depolarizing_factor(3, 1.0, &mut v), FqfiStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(fqfi_depolarizing_factor(3, 0.5, &mut v), FqfiStatus::Ok);
        assert!((v - 0.25 / (0.5 + 1.0 / 8.0)).abs() < 1e-15);
    }
}

#[test]
fn majorana_points_of_ghz_are_equatorial() {
    let s = ghz(5);
    unsafe {
        let (mut th, mut ph, mut k) = ([0.0; 5], [0.0; 5], 0usize);
        assert_eq!(fqfi_majorana(s, th.as_mut_ptr(), ph.as_mut_ptr(), 5, &mut k), FqfiStatus::Ok);
        assert_eq!(k, 5);
        for t in th {
            assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        }
        assert_eq!(
            fqfi_majorana(s, th.as_mut_ptr(), ph.as_mut_ptr(), 4, &mut k),
            FqfiStatus::BufferTooSmall
        );
        fqfi_state_free(s);
    }
}

#[test]
fn maximize_returns_owned_state() {
    unsafe {
        let (mut v, mut best) = (0.0, ptr::null_mut());
        assert_eq!(fqfi_maximize(3, 4, 1e-9, 5000, 2, &mut v, &mut best), FqfiStatus::Ok);
        let mut h = 0.0;
        assert_eq!(fqfi_haar_analytic(best, &mut h), FqfiStatus::Ok);
        assert!((v - h).abs() < 1e-9);
        assert!((v - 17.0).abs() < 1e-6, "{v}");
        fqfi_state_free(best);

        let mut best = ptr::null_mut();
        assert_eq!(fqfi_maximize(6, 1, 1e-12, 1, 0, &mut v, &mut best), FqfiStatus::NotConverged);
        assert!(!best.is_null());
        fqfi_state_free(best);
    }
}

#[test]
fn protocol_summary() {
    let mut out = std::mem::MaybeUninit::<FqfiProtocolSummary>::uninit();
    unsafe {
        let st = fqfi_run_protocol(4, 0.3, 1.2, 0.4, 5000, 8, 1, out.as_mut_ptr());
        assert_eq!(st, FqfiStatus::Ok);
        let s = out.assume_init();
        assert_eq!(s.batches, 8);
        assert_eq!(s.failed, 0);
        assert!(s.crb_trace > 0.0 && s.total_mean_squared_error > 0.0);
        assert!(s.respects_bound >= 0);
        assert_eq!(fqfi_run_protocol(4, 0.3, 1.2, 0.4, 5, 8, 1, out.as_mut_ptr()), FqfiStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/frame_qfi.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}
