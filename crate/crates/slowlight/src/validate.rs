//! Fast invariant suite behind the `validate` verb.
//!
//! Each check reduces to one number compared against a limit. The suite derives its
//! settings from the scenario but narrows the scans so the whole run stays within a few
//! seconds.

use std::path::Path;

use anyhow::Result;
use slowlight_core::analysis::{extract_moment_from_sweep, polariton_sweep};
use slowlight_core::beamprop::{deflection_record, sign_reversals, BeamSetup};
use slowlight_core::constants::MU_B;
use slowlight_core::fields::FieldMap;
use slowlight_core::medium::{calibrate_to_vg, group_velocity};
use slowlight_core::polariton::{from_coupling, sg_deflection};
use slowlight_core::pulse::measure_vg;

use crate::commands::{compute_spectrum, compute_sweep, fock_table, SWEEP_HEADER};
use crate::output::{csv_bytes, write_atomic};
use crate::scenario::Scenario;
use crate::units::format_number;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit,
            passed: value <= limit,
        }
    }

    fn exactly(name: &'static str, value: f64, expected: f64) -> Self {
        Self {
            name,
            value,
            limit: expected,
            passed: value == expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "value", "limit", "pass"])?;
        for c in &self.checks {
            w.write_record([
                c.name,
                &format_number(c.value),
                &format_number(c.limit),
                if c.passed { "true" } else { "false" },
            ])?;
        }
        Ok(w.into_inner()?)
    }
}

const NARROW_WAIST: f64 = 50e-6;

fn sweep_bytes(s: &Scenario) -> Result<Vec<u8>> {
    let sweep = compute_sweep(s)?;
    csv_bytes(
        &SWEEP_HEADER,
        sweep.rows.iter().map(|r| {
            vec![
                r.rabi_control,
                r.v_g,
                r.v_g_sigma,
                r.inverse_velocity(),
                r.angle,
                r.angle_sigma,
                r.camera_displacement,
                r.transmission,
                r.local_angle,
                r.sublinearity,
                r.polariton_angle,
            ]
        }),
    )
}

pub fn run(s: &Scenario) -> Result<Report> {
    let mut checks = Vec::new();

    let round_trip = Scenario::parse(&s.serialize())? == *s;
    checks.push(Check::exactly(
        "config_round_trip",
        f64::from(u8::from(round_trip)),
        1.0,
    ));

    let fock = fock_table(
        &[1, 2, 3, 4, 5],
        &[0.2, std::f64::consts::FRAC_PI_4, 1.2],
        s.g_factor,
    )?;
    let worst = fock.iter().map(|r| r.relative_error()).fold(0.0, f64::max);
    checks.push(Check::at_most("fock_oracle_relative_error", worst, 1e-12));

    // both pictures on resonance, narrow beam, no ground-state decoherence
    let lossless = slowlight_core::medium::MediumParams {
        gamma_c: 0.0,
        delta_one_photon: 0.0,
        ..s.medium()?
    };
    let lossless = calibrate_to_vg(&lossless, 300.0)?;
    let fmap = s.field_map();
    let narrow = BeamSetup::new(NARROW_WAIST, 1.0, &lossless)?;
    let wave = deflection_record(&lossless, &fmap, &narrow, 0.0)?.angle;
    let state = from_coupling(
        lossless.rabi_control,
        lossless.coupling_collective,
        lossless.g_factor,
    )?;
    let particle = sg_deflection(
        &state,
        lossless.cell_length,
        fmap.grad_x,
        lossless.wavenumber(),
    )?;
    checks.push(Check::at_most(
        "dual_model_relative_difference",
        ((wave - particle) / particle).abs(),
        0.05,
    ));

    let reversed = deflection_record(&lossless, &fmap.reversed(), &narrow, 0.0)?.angle;
    checks.push(Check::at_most(
        "gradient_reversal_residual",
        ((wave + reversed) / wave).abs(),
        1e-6,
    ));
    let flat = FieldMap {
        grad_x: 0.0,
        ..fmap
    };
    checks.push(Check::at_most(
        "zero_gradient_angle_rad",
        deflection_record(&lossless, &flat, &narrow, 0.0)?
            .angle
            .abs(),
        1e-9,
    ));

    let medium = s.medium()?;
    let sigma_t = s.pulse_sigma.max(20.0 / medium.eit_window());
    let measured = measure_vg(&medium, sigma_t)?.v_g;
    let model = group_velocity(&medium)?;
    checks.push(Check::at_most(
        "vg_cross_check_relative_difference",
        ((measured - model) / model).abs(),
        0.02,
    ));

    let mut coarse = s.clone();
    coarse.spectrum_span = 4.0;
    coarse.spectrum_points = 41;
    let spectrum = compute_spectrum(&coarse)?;
    let angles: Vec<f64> = spectrum.iter().map(|r| r.angle).collect();
    let peak = angles.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let parity = angles
        .iter()
        .zip(angles.iter().rev())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / peak;
    checks.push(Check::at_most("spectrum_parity_relative", parity, 0.01));
    checks.push(Check::exactly(
        "spectrum_sign_reversals",
        sign_reversals(&angles, 1e-3 * peak) as f64,
        2.0,
    ));
    let brightest = spectrum
        .iter()
        .max_by(|a, b| a.transmission.total_cmp(&b.transmission))
        .map(|r| r.delta_laser.abs())
        .unwrap_or(f64::INFINITY);
    checks.push(Check::at_most(
        "transmission_peak_offset_windows",
        brightest / medium.eit_window(),
        1e-9,
    ));

    let metadata = s.sweep_config()?.metadata();
    let mu = 2.0 * s.g_factor * MU_B * 0.9;
    let synthetic = polariton_sweep(mu, &[150.0, 300.0, 600.0, 1200.0], metadata)?;
    let recovered = extract_moment_from_sweep(&synthetic)?.mu;
    checks.push(Check::at_most(
        "extraction_round_trip_relative",
        ((recovered - mu) / mu).abs(),
        1e-12,
    ));

    let mut small = s.clone();
    small.waist = NARROW_WAIST;
    small.sweep_rabi_factors = vec![0.8, 1.3];
    small.repeats = small.repeats.max(2);
    small.displacement_noise = small.displacement_noise.max(1e-7);
    let identical = sweep_bytes(&small)? == sweep_bytes(&small)?;
    checks.push(Check::exactly(
        "sweep_bytes_identical",
        f64::from(u8::from(identical)),
        1.0,
    ));

    Ok(Report { checks })
}

pub fn run_and_write(s: &Scenario, out: &Path) -> Result<Report> {
    let report = run(s)?;
    for c in &report.checks {
        println!(
            "{:<38} {:>12.4e} (limit {:.1e})  {}",
            c.name,
            c.value,
            c.limit,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    write_atomic(&out.join("validate.csv"), &report.csv()?)?;
    Ok(report)
}
