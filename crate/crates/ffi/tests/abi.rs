use std::ffi::{CStr, CString};
use std::ptr;

use tricorr_ffi::*;

fn last_error() -> String {
    let p = tc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn ghz(a: f64, b: f64) -> *mut TcState {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tc_state_ghz(a, b, &mut s) }, TcStatus::Ok);
    s
}

#[test]
fn ghz_measures() {
    let s = ghz(0.6, 0.8);
    let (mut cf, mut g, mut gm) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(tc_concurrence_fill(s, &mut cf), TcStatus::Ok);
        assert_eq!(tc_gmc(s, &mut g), TcStatus::Ok);
        assert_eq!(tc_global_measure(s, &mut gm), TcStatus::Ok);
        let mut edges = [0.0; 3];
        assert_eq!(tc_triangle_edges(s, edges.as_mut_ptr()), TcStatus::Ok);
        assert!(edges.iter().all(|e| (e - 0.9216).abs() < 1e-12));
        tc_state_free(s);
    }
    assert!((cf - 0.9216).abs() < 1e-12);
    assert!((g - 0.9216).abs() < 1e-12);
    assert!((gm - 0.9216).abs() < 1e-12);
}

#[test]
fn correlators_by_name() {
    let s = ghz(0.6, 0.8);
    let obs = CString::new("X").unwrap();
    let (mut c, mut mi, mut mp) = (0.0, 0.0, 0.0);
    let mut per_cut = [0.0; 3];
    unsafe {
        assert_eq!(tc_pcc_tripartite(s, obs.as_ptr(), &mut c, per_cut.as_mut_ptr()), TcStatus::Ok);
        assert_eq!(tc_pcc_tripartite(s, obs.as_ptr(), &mut c, ptr::null_mut()), TcStatus::Ok);
        let z = CString::new("Z").unwrap();
        assert_eq!(tc_mi_tripartite(s, obs.as_ptr(), &mut mi), TcStatus::Ok);
        assert_eq!(tc_mp_tripartite(s, z.as_ptr(), &mut mp), TcStatus::Ok);
        let p1 = CString::new("P1").unwrap();
        let mut sum = 0.0;
        assert_eq!(tc_maccone_sum(s, obs.as_ptr(), p1.as_ptr(), &mut sum), TcStatus::Ok);
        assert!((sum - 1.96).abs() < 1e-12);
        tc_state_free(s);
    }
    assert!((c - 0.96).abs() < 1e-12);
    assert!(per_cut.iter().all(|v| (v - 0.96).abs() < 1e-12));
    assert!(mi > 0.0);
    assert!((mp - 1.0).abs() < 1e-12);
}

#[test]
fn error_codes_and_messages() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(tc_state_ghz(0.6, 0.6, &mut s), TcStatus::InvalidState);
        assert!(s.is_null());
        assert!(last_error().contains("normalized"));
        assert_eq!(tc_state_w(2.0, &mut s), TcStatus::InvalidArgument);
        assert!(last_error().contains("theta"));
        assert_eq!(tc_state_ghz(0.6, 0.8, ptr::null_mut()), TcStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(tc_gmc(ptr::null(), &mut v), TcStatus::NullPointer);
        let g = ghz(0.6, 0.8);
        let bad = CString::new("Q").unwrap();
        assert_eq!(tc_pcc_tripartite(g, bad.as_ptr(), &mut v, ptr::null_mut()), TcStatus::InvalidArgument);
        assert!(last_error().contains("Q"));
        // Success clears the message.
        assert_eq!(tc_gmc(g, &mut v), TcStatus::Ok);
        assert!(tc_last_error_message().is_null());
        tc_state_free(g);
        tc_state_free(ptr::null_mut());
    }
}

#[test]
fn raw_buffers() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = [0.0; 16];
    amps[0] = h;
    amps[14] = h;
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(tc_state_from_amplitudes(amps.as_ptr(), 16, &mut s), TcStatus::Ok);
        assert_eq!(tc_state_from_amplitudes(amps.as_ptr(), 15, &mut s), TcStatus::InvalidArgument);
        let mut pure = false;
        assert_eq!(tc_state_is_pure(s, &mut pure), TcStatus::Ok);
        assert!(pure);
        let mut rho = [0.0; 128];
        assert_eq!(tc_state_density(s, rho.as_mut_ptr(), 128), TcStatus::Ok);
        assert!((rho[0] - 0.5).abs() < 1e-15);
        assert!((rho[2 * 7] - 0.5).abs() < 1e-15);
        let mut t = ptr::null_mut();
        assert_eq!(tc_state_from_density(rho.as_ptr(), 128, &mut t), TcStatus::Ok);
        let mut cf = 0.0;
        assert_eq!(tc_concurrence_fill(t, &mut cf), TcStatus::Ok);
        assert!((cf - 1.0).abs() < 1e-12);
        rho[0] = 0.7;
        let mut u = ptr::null_mut();
        assert_eq!(tc_state_from_density(rho.as_ptr(), 128, &mut u), TcStatus::InvalidState);
        assert!(last_error().contains("trace"));
        tc_state_free(s);
        tc_state_free(t);
    }
}

#[test]
fn dynamics_entry_points() {
    let (mut t, mut has) = (0.0, false);
    unsafe {
        assert_eq!(tc_esd_time(0.5, &mut t, &mut has), TcStatus::Ok);
        assert!(has);
        let oracle = -(1.0 - (1.0f64 / 3.0).powf(2.0 / 3.0)).ln();
        assert!((t - oracle).abs() < 1e-10);
        assert_eq!(tc_esd_time(0.05, &mut t, &mut has), TcStatus::Ok);
        assert!(!has);
        assert_eq!(tc_esd_time(1.5, &mut t, &mut has), TcStatus::InvalidArgument);

        let (mut c, mut g, mut back) = (0.0, 0.0, 0.0);
        assert_eq!(tc_pcc_damped_closed(0.5, 0.3, &mut c), TcStatus::Ok);
        assert_eq!(tc_gmc_damped_closed(0.5, 0.3, &mut g), TcStatus::Ok);
        assert_eq!(tc_gmc_from_pcc(c, 0.5, &mut back), TcStatus::Ok);
        assert!((g - back).abs() < 1e-10);

        let s = ghz(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
        let mut d = ptr::null_mut();
        assert_eq!(tc_state_damp(s, 0.3, &mut d), TcStatus::Ok);
        let plus = CString::new("Pplus").unwrap();
        let mut sim = 0.0;
        assert_eq!(tc_pcc_tripartite(d, plus.as_ptr(), &mut sim, ptr::null_mut()), TcStatus::Ok);
        assert!((sim - c).abs() < 1e-9);
        tc_state_free(s);
        tc_state_free(d);
    }
}

#[test]
fn sampling_is_seeded() {
    let s = ghz(0.6, 0.8);
    let obs = CString::new("X").unwrap();
    let (mut e1, mut se1, mut e2, mut se2) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(tc_sample_pcc(s, obs.as_ptr(), 4000, 11, &mut e1, &mut se1), TcStatus::Ok);
        assert_eq!(tc_sample_pcc(s, obs.as_ptr(), 4000, 11, &mut e2, &mut se2), TcStatus::Ok);
        assert_eq!(tc_sample_pcc(s, obs.as_ptr(), 0, 11, &mut e2, &mut se2), TcStatus::InvalidArgument);
        tc_state_free(s);
    }
    assert_eq!(e1, e2);
    assert_eq!(se1, se2);
    assert!((e1 - 0.96).abs() < 5.0 * se1.max(1e-3));
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(tc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
