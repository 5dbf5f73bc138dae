use std::ffi::CStr;
use std::ptr;

use cho_ffi::*;

fn last_error() -> String {
    let p = cho_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn beat(r: f64) -> *mut ChoParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cho_params_from_beat(1.0, 1.0, r, 10.0, &mut p) }, ChoStatus::Ok);
    p
}

#[test]
fn params_and_frequencies() {
    let p = beat(0.1);
    let mut f = ChoFrequencies::default();
    assert_eq!(unsafe { cho_params_frequencies(p, &mut f) }, ChoStatus::Ok);
    assert!((f.omega - 0.9).abs() < 1e-12 && (f.omega_prime - 1.1).abs() < 1e-12);
    assert!((f.delta_omega - 0.1).abs() < 1e-12);
    unsafe { cho_params_free(p) };

    let mut q = ptr::null_mut();
    assert_eq!(unsafe { cho_params_new(-1.0, 1.0, 0.1, 10.0, &mut q) }, ChoStatus::InvalidParams);
    assert!(q.is_null());
    assert!(last_error().contains("invalid parameters"));
    assert_eq!(unsafe { cho_params_frequencies(ptr::null(), &mut f) }, ChoStatus::NullPointer);
    unsafe { cho_params_free(ptr::null_mut()) };
    assert!(!unsafe { CStr::from_ptr(cho_version()) }.to_bytes().is_empty());
}

#[test]
fn state_round_trip() {
    let p = beat(0.1);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cho_state_project(p, 1, 7, &mut s) }, ChoStatus::Ok);
    let (mut c10, mut c01, mut tail) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(cho_state_coefficient(s, 1, 0, &mut c10), ChoStatus::Ok);
        assert_eq!(cho_state_coefficient(s, 0, 1, &mut c01), ChoStatus::Ok);
        assert_eq!(cho_state_tail_bound(s, &mut tail), ChoStatus::Ok);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((c10 - h).abs() < 0.05 && (c01 + h).abs() < 0.05);
    assert!(tail < 1e-6);

    // ψ(x₁, x₂, 0) is real: √(2/π) a x₂ e^{−a(x₁²+x₂²)/2} with a = √(mk)/ħ
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { cho_state_eval(s, 0.3, -1.2, 0.0, &mut re, &mut im) }, ChoStatus::Ok);
    let k = 0.9f64 * 0.9;
    let a = k.sqrt() / 10.0;
    let expected = (2.0 / std::f64::consts::PI).sqrt() * a * -1.2 * (-0.5 * a * (0.09 + 1.44)).exp();
    // truncation at n′ ≤ 7 leaves ~1e-4 relative amplitude error at this coupling
    assert!((re - expected).abs() < 1e-3 * expected.abs() && im.abs() < 1e-9, "{re} {im} {expected}");

    let mut e = ChoEnergies::default();
    assert_eq!(unsafe { cho_state_energies(s, 0.0, &mut e) }, ChoStatus::Ok);
    assert!((e.e1 + e.e2 + e.e_interaction - e.e_total).abs() < 1e-9);
    assert_eq!(unsafe { cho_state_project(p, 100, 7, &mut s) }, ChoStatus::InvalidArgument);
    unsafe {
        cho_state_free(s);
        cho_params_free(p);
    }
}

#[test]
fn marginals_and_velocity() {
    let p = beat(0.1);
    let mut v = 0.0;
    assert_eq!(unsafe { cho_marginal_closed_form(p, ChoParticle::Two as i32, ChoForm::Corrected as i32, 1.0, 0.0, &mut v) }, ChoStatus::Ok);
    assert!(v > 0.0);
    assert_eq!(unsafe { cho_marginal_closed_form(p, 3, 0, 1.0, 0.0, &mut v) }, ChoStatus::InvalidArgument);
    assert!(last_error().contains("particle"));

    let (mut v1, mut v2) = (0.0, 0.0);
    assert_eq!(unsafe { cho_guidance_velocity(p, 0.7, -1.2, 0.0, &mut v1, &mut v2) }, ChoStatus::Ok);
    assert_eq!((v1, v2), (0.0, 0.0));
    assert_eq!(unsafe { cho_guidance_velocity(p, 0.0, 0.0, 1.0, &mut v1, &mut v2) }, ChoStatus::Singularity);
    unsafe { cho_params_free(p) };
}

#[test]
fn trajectory_handle() {
    let p = beat(0.1);
    let mut tr = ptr::null_mut();
    let t_end = std::f64::consts::PI / 0.1;
    let st = unsafe { cho_trajectory_integrate(p, 0.0, -1.0, t_end, 1e-12, 1e-14, &mut tr, ptr::null_mut()) };
    assert_eq!(st, ChoStatus::Ok);
    let mut end = ChoPoint::default();
    assert_eq!(unsafe { cho_trajectory_eval(tr, t_end, &mut end) }, ChoStatus::Ok);
    // the reduced field conserves the radius and closes the path at π/δω
    assert!(end.x1.abs() < 1e-7 && (end.x2 + 1.0).abs() < 1e-7, "{end:?}");
    assert_eq!(unsafe { cho_trajectory_eval(tr, 2.0 * t_end, &mut end) }, ChoStatus::InvalidArgument);

    let mut n = 0usize;
    assert_eq!(unsafe { cho_trajectory_len(tr, &mut n) }, ChoStatus::Ok);
    let mut buf = vec![ChoPoint::default(); n + 3];
    let mut written = 0usize;
    assert_eq!(unsafe { cho_trajectory_states(tr, buf.as_mut_ptr(), buf.len(), &mut written) }, ChoStatus::Ok);
    assert_eq!(written, n);
    assert_eq!((buf[0].x1, buf[0].x2), (0.0, -1.0));
    assert!(buf[..n].windows(2).all(|w| w[0].t < w[1].t));
    unsafe { cho_trajectory_free(tr) };

    let mut lg = f64::NAN;
    let mut bad = ptr::null_mut();
    let st = unsafe { cho_trajectory_integrate(p, 0.0, 0.0, t_end, 1e-9, 1e-12, &mut bad, &mut lg) };
    assert_eq!(st, ChoStatus::Singularity);
    assert!(bad.is_null());
    assert_eq!(lg, 0.0);
    unsafe { cho_params_free(p) };
}
