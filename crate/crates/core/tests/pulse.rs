use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use slowlight_core::fit::fit_gaussian_peak;
use slowlight_core::medium::{calibrate_to_vg, group_velocity, MediumParams};
use slowlight_core::pulse::{
    measure_vg, propagate_pulse, propagate_pulse_sampled, DEFAULT_SIGMA_T,
};

#[test]
fn noisy_gaussian_centre_recovered() {
    let sigma = 1e-2;
    let t0 = 3e-3;
    let t: Vec<f64> = (0..512)
        .map(|i| (i as f64 - 256.0) * sigma / 25.0)
        .collect();
    let clean: Vec<f64> = t
        .iter()
        .map(|&ti| (-0.5 * ((ti - t0) / sigma).powi(2)).exp())
        .collect();
    let noise = Normal::new(0.0, 0.01).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let mut errors = Vec::new();
    for _ in 0..100 {
        let noisy: Vec<f64> = clean.iter().map(|v| v + noise.sample(&mut rng)).collect();
        let fit = fit_gaussian_peak(&t, &noisy).unwrap();
        errors.push((fit.peak_time - t0) / sigma);
    }
    let worst = errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let rms = (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt();
    println!("t0 error over 100 trials: rms {rms:.2e} σ, worst {worst:.2e} σ");
    assert!(worst < 0.05);
}

#[test]
fn pulse_and_dispersion_agree_in_adiabatic_regime() {
    for v_g in [300.0, 1000.0] {
        let medium = calibrate_to_vg(&MediumParams::default(), v_g).unwrap();
        let expected = group_velocity(&medium).unwrap();
        // spectral width 1/σ_t at 5 % of the window, and the default duration
        for sigma_t in [20.0 / medium.eit_window(), DEFAULT_SIGMA_T] {
            let measured = measure_vg(&medium, sigma_t).unwrap();
            assert!(measured.adiabaticity <= 0.05 + 1e-12);
            assert!(
                (measured.v_g - expected).abs() < 0.02 * expected,
                "σ_t = {sigma_t:e}: {} vs {expected}",
                measured.v_g
            );
        }
    }
}

#[test]
fn energy_conserved_without_decoherence() {
    let medium = calibrate_to_vg(
        &MediumParams {
            gamma_c: 0.0,
            ..MediumParams::default()
        },
        1000.0,
    )
    .unwrap();
    let run = propagate_pulse(&medium, 0.0, DEFAULT_SIGMA_T, medium.cell_length).unwrap();
    let ratio = run.exit.energy() / run.entry.energy();
    assert!(ratio <= 1.0 && 1.0 - ratio < 1e-6, "{ratio}");
}

#[test]
fn delay_converged_in_time_resolution() {
    let medium = calibrate_to_vg(&MediumParams::default(), 300.0).unwrap();
    let coarse = propagate_pulse_sampled(&medium, 0.0, DEFAULT_SIGMA_T, 0.05, 8.0)
        .unwrap()
        .delay();
    let fine = propagate_pulse_sampled(&medium, 0.0, DEFAULT_SIGMA_T, 0.05, 32.0)
        .unwrap()
        .delay();
    assert!(
        (coarse - fine).abs() < 1e-4 * fine,
        "{coarse:e} vs {fine:e}"
    );
}

#[test]
fn short_pulses_bias_the_measurement() {
    // reported, not asserted: the Fourier width of the pulse pulls the estimate
    let medium = calibrate_to_vg(&MediumParams::default(), 300.0).unwrap();
    let truth = group_velocity(&medium).unwrap();
    for fraction in [0.01, 0.05, 0.2, 0.5] {
        let sigma_t = 1.0 / (fraction * medium.eit_window());
        match measure_vg(&medium, sigma_t) {
            Ok(m) => println!(
                "1/σ_t = {fraction} window: v_g bias {:+.3} %",
                100.0 * (m.v_g / truth - 1.0)
            ),
            Err(e) => println!("1/σ_t = {fraction} window: {e}"),
        }
    }
}
