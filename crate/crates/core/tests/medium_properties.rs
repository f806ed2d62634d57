use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

use proptest::prelude::*;
use slowlight_core::constants::C;
use slowlight_core::medium::{
    calibrate_to_vg, group_velocity, group_velocity_from_step, index_slope, susceptibility,
    MediumParams,
};
use slowlight_core::polariton::from_coupling;

fn lossless() -> MediumParams {
    MediumParams {
        gamma_c: 0.0,
        ..MediumParams::default()
    }
}

proptest! {
    #[test]
    fn susceptibility_parity(
        scale in -5.0f64..5.0,
        gamma_c in 0.0f64..1e5,
        rabi in 1e5f64..2e7,
    ) {
        let p = MediumParams { gamma_c, rabi_control: rabi, ..MediumParams::default() };
        let delta = scale * p.eit_window();
        let plus = susceptibility(&p, delta).unwrap().chi;
        let minus = susceptibility(&p, -delta).unwrap().chi;
        let tol = 1e-12 * plus.norm().max(1e-300);
        prop_assert!((plus.re + minus.re).abs() <= tol);
        prop_assert!((plus.im - minus.im).abs() <= tol);
        prop_assert!(plus.im >= 0.0);
    }

    #[test]
    fn absorption_minimal_on_resonance(scale in 1e-3f64..10.0) {
        let p = MediumParams::default();
        let centre = susceptibility(&p, 0.0).unwrap().chi.im;
        let off = susceptibility(&p, scale * p.eit_window()).unwrap().chi.im;
        prop_assert!(off > centre);
    }
}

#[test]
fn resonant_absorption_grows_with_decoherence() {
    let mut last = -1.0;
    for gamma_c in [0.0, 1e2, 1e3, 1e4, 1e5, 1e6] {
        let p = MediumParams {
            gamma_c,
            ..MediumParams::default()
        };
        let im = susceptibility(&p, 0.0).unwrap().chi.im;
        assert!(im > last, "γ_c = {gamma_c}: {im} ≤ {last}");
        last = im;
    }
}

#[test]
fn normal_dispersion_inside_window() {
    for gamma_c in [0.0, 2e3, 2e4] {
        let p = MediumParams {
            gamma_c,
            ..MediumParams::default()
        };
        assert!(index_slope(&p, 0.0).unwrap() > 0.0);
        assert!(group_velocity(&p).unwrap() < C);
    }
}

#[test]
fn group_velocity_matches_mixing_angle() {
    let base = lossless();
    for theta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
        let p = MediumParams {
            coupling_collective: base.rabi_control * theta.tan(),
            ..base
        };
        let wave = group_velocity(&p).unwrap();
        let particle = C * theta.cos().powi(2);
        assert!(
            (wave - particle).abs() / particle < 0.01,
            "Θ = {theta}: {wave} vs {particle}"
        );
    }
}

#[test]
fn closed_loop_identity_with_polariton() {
    for v in [150.0, 300.0, 1200.0] {
        let p = calibrate_to_vg(&lossless(), v).unwrap();
        let ps = from_coupling(p.rabi_control, p.coupling_collective, p.g_factor).unwrap();
        let vg = group_velocity(&p).unwrap();
        assert!((ps.v_g - vg).abs() / vg < 0.01, "{} vs {vg}", ps.v_g);
    }
}

#[test]
fn group_velocity_independent_of_step_resolution() {
    let p = calibrate_to_vg(&MediumParams::default(), 400.0).unwrap();
    let analytic = C / (1.0 + p.omega_s() * index_slope(&p, 0.0).unwrap());
    let reference = group_velocity(&p).unwrap();
    assert!((reference - analytic).abs() / analytic < 1e-4);
    for factor in [1e-3, 1e-2, 0.1, 0.25, 4.0] {
        let h = factor * p.eit_window();
        let v = group_velocity_from_step(&p, h).unwrap();
        assert!(
            (v - reference).abs() / reference < 1e-3,
            "step {h:e}: {v} vs {reference}"
        );
    }
}
