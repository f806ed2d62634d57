//! The experiments behind each CLI verb. Every function writes its files into `out` and
//! returns the computed data so callers (and tests) can inspect it without reparsing.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use slowlight_core::analysis::{extract_moment_from_sweep, sweep_row, MomentEstimate, SweepResult};
use slowlight_core::beamprop::{
    check_spectrum_range, deflection_record, sign_reversals, spectrum_detunings, DeflectionRecord,
};
use slowlight_core::constants::MU_B;
use slowlight_core::medium::group_velocity;
use slowlight_core::polariton::fock::{fock_moment, FockSpace};
use slowlight_core::polariton::PolaritonState;
use slowlight_core::pulse::{propagate_pulse, PulsePropagation, PulseTrace};

use crate::output::{write_atomic, write_csv, Summary};
use crate::scenario::Scenario;
use crate::svg::{line_chart, Series};

pub const SPECTRUM_HEADER: [&str; 4] = [
    "delta_rad_s",
    "transmission",
    "angle_rad",
    "camera_displacement_m",
];

pub const SWEEP_HEADER: [&str; 11] = [
    "rabi_control_rad_s",
    "v_g_m_s",
    "v_g_sigma_m_s",
    "inverse_vg_s_m",
    "angle_rad",
    "angle_sigma_rad",
    "camera_displacement_m",
    "transmission",
    "local_angle_rad",
    "sublinearity",
    "polariton_angle_rad",
];

pub const PULSE_HEADER: [&str; 2] = ["t_s", "intensity_W"];

pub const FOCK_HEADER: [&str; 5] = [
    "atoms",
    "theta_rad",
    "fock_mu_J_T",
    "analytic_mu_J_T",
    "relative_error",
];

/// Relative agreement required of the Fock-space moment.
pub const FOCK_TOLERANCE: f64 = 1e-12;

fn save_svg(path: &Path, svg: String) -> Result<()> {
    write_atomic(path, svg.as_bytes())
}

/// Deflection records over the scenario's detuning scan, in scan order.
pub fn compute_spectrum(s: &Scenario) -> Result<Vec<DeflectionRecord>> {
    let medium = s.medium()?;
    let fmap = s.field_map();
    let beam = s.beam(&medium)?;
    let deltas = spectrum_detunings(&medium, s.spectrum_span, s.spectrum_points);
    check_spectrum_range(&medium, &deltas)?;
    let records = deltas
        .par_iter()
        .map(|&d| deflection_record(&medium, &fmap, &beam, d))
        .collect::<slowlight_core::Result<Vec<_>>>()?;
    Ok(records)
}

pub fn spectrum(s: &Scenario, out: &Path) -> Result<Vec<DeflectionRecord>> {
    let medium = s.medium()?;
    let records = compute_spectrum(s)?;
    write_csv(
        &out.join("spectrum.csv"),
        &SPECTRUM_HEADER,
        records.iter().map(|r| {
            vec![
                r.delta_laser,
                r.transmission,
                r.angle,
                r.camera_displacement,
            ]
        }),
    )?;

    let delta: Vec<f64> = records.iter().map(|r| r.delta_laser).collect();
    let transmission: Vec<f64> = records.iter().map(|r| r.transmission).collect();
    let angle: Vec<f64> = records.iter().map(|r| r.angle).collect();
    save_svg(
        &out.join("transmission.svg"),
        line_chart(
            "Transmission",
            "two-photon detuning (rad/s)",
            "transmission",
            &[Series {
                label: "T",
                x: &delta,
                y: &transmission,
            }],
        ),
    )?;
    save_svg(
        &out.join("deflection.svg"),
        line_chart(
            "Deflection",
            "two-photon detuning (rad/s)",
            "angle (rad)",
            &[Series {
                label: "angle",
                x: &delta,
                y: &angle,
            }],
        ),
    )?;

    let peak = angle.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let centre = deflection_record(&medium, &s.field_map(), &s.beam(&medium)?, 0.0)?;
    Summary::new()
        .number("group_velocity_m_s", group_velocity(&medium)?)
        .number("eit_window_rad_s", medium.eit_window())
        .number("resonant_angle_rad", centre.angle)
        .number("resonant_camera_displacement_m", centre.camera_displacement)
        .number("resonant_transmission", centre.transmission)
        .text(
            "sign_reversals",
            &sign_reversals(&angle, 1e-3 * peak).to_string(),
        )
        .write(&out.join("spectrum_summary.txt"))?;
    Ok(records)
}

pub fn compute_sweep(s: &Scenario) -> Result<SweepResult> {
    let cfg = s.sweep_config()?;
    let omegas = s.sweep_rabi();
    if omegas.is_empty() {
        anyhow::bail!("sweep_rabi_factors is empty");
    }
    let rows = omegas
        .par_iter()
        .enumerate()
        .map(|(i, &omega)| sweep_row(&cfg, omega, i))
        .collect::<slowlight_core::Result<Vec<_>>>()?;
    Ok(SweepResult::from_rows(rows, cfg.metadata()))
}

pub fn write_sweep(sweep: &SweepResult, out: &Path) -> Result<MomentEstimate> {
    write_csv(
        &out.join("sweep.csv"),
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
    )?;

    let estimate = extract_moment_from_sweep(sweep)?;
    let fit = sweep.linearity();
    let spread = slowlight_core::stats::standard_error(&estimate.per_row);
    Summary::new()
        .number("mu_J_per_T", estimate.mu)
        .number("mu_standard_error_J_per_T", spread)
        .number("reference_mu_J_per_T", 2.0 * sweep.metadata.g_factor * MU_B)
        .number("ratio", estimate.ratio)
        .number("slope_rad_m_per_s", fit.slope)
        .number("intercept_rad", fit.intercept)
        .number("r_squared", fit.r_squared)
        .number(
            "max_sublinearity",
            sweep
                .rows
                .iter()
                .map(|r| r.sublinearity)
                .fold(f64::NEG_INFINITY, f64::max),
        )
        .text("rows", &sweep.rows.len().to_string())
        .write(&out.join("sweep_summary.txt"))?;

    let inv: Vec<f64> = sweep.rows.iter().map(|r| r.inverse_velocity()).collect();
    let angle: Vec<f64> = sweep.rows.iter().map(|r| r.angle).collect();
    let particle: Vec<f64> = sweep.rows.iter().map(|r| r.polariton_angle).collect();
    save_svg(
        &out.join("sweep.svg"),
        line_chart(
            "Deflection against inverse group velocity",
            "1/v_g (s/m)",
            "angle (rad)",
            &[
                Series {
                    label: "wave optics",
                    x: &inv,
                    y: &angle,
                },
                Series {
                    label: "polariton",
                    x: &inv,
                    y: &particle,
                },
            ],
        ),
    )?;
    Ok(estimate)
}

pub fn vg_sweep(s: &Scenario, out: &Path) -> Result<(SweepResult, MomentEstimate)> {
    let sweep = compute_sweep(s)?;
    let estimate = write_sweep(&sweep, out)?;
    Ok((sweep, estimate))
}

fn trace_rows(trace: &PulseTrace, power: f64) -> impl Iterator<Item = Vec<f64>> + '_ {
    trace
        .t
        .iter()
        .zip(&trace.intensity)
        .map(move |(&t, &i)| vec![t, i * power])
}

pub fn pulse(s: &Scenario, out: &Path) -> Result<PulsePropagation> {
    let medium = s.medium()?;
    let run = propagate_pulse(&medium, s.pulse_detuning, s.pulse_sigma, s.cell_length)?;
    write_csv(
        &out.join("pulse_entry.csv"),
        &PULSE_HEADER,
        trace_rows(&run.entry, s.beam_power),
    )?;
    write_csv(
        &out.join("pulse_exit.csv"),
        &PULSE_HEADER,
        trace_rows(&run.exit, s.beam_power),
    )?;

    let delay = run.delay();
    let mut summary = Summary::new();
    summary
        .number("entry_peak_s", run.entry.fit_peak_time)
        .number("entry_sigma_s", run.entry.fit_sigma)
        .number("exit_peak_s", run.exit.fit_peak_time)
        .number(
            "exit_peak_uncertainty_s",
            run.exit.fit.peak_time_uncertainty,
        )
        .number("exit_sigma_s", run.exit.fit_sigma)
        .number("exit_fit_residual", run.exit.fit.residual)
        .number("delay_s", delay)
        .number(
            "energy_transmission",
            run.exit.energy() / run.entry.energy(),
        )
        .number("adiabaticity", run.adiabaticity);
    if delay > 0.0 {
        summary.number("v_g_from_delay_m_s", s.cell_length / delay);
    }
    if s.pulse_detuning == 0.0 {
        summary.number("v_g_from_dispersion_m_s", group_velocity(&medium)?);
    }
    summary.write(&out.join("pulse_summary.txt"))?;

    let t_ms: Vec<f64> = run.entry.t.iter().map(|t| t * 1e3).collect();
    let entry: Vec<f64> = run
        .entry
        .intensity
        .iter()
        .map(|i| i * s.beam_power)
        .collect();
    let exit: Vec<f64> = run
        .exit
        .intensity
        .iter()
        .map(|i| i * s.beam_power)
        .collect();
    save_svg(
        &out.join("pulse.svg"),
        line_chart(
            "Pulse delay",
            "time (ms)",
            "power (W)",
            &[
                Series {
                    label: "entry",
                    x: &t_ms,
                    y: &entry,
                },
                Series {
                    label: "exit",
                    x: &t_ms,
                    y: &exit,
                },
            ],
        ),
    )?;
    Ok(run)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockRow {
    pub atoms: usize,
    pub theta: f64,
    pub fock_mu: f64,
    pub analytic_mu: f64,
}

impl FockRow {
    pub fn relative_error(&self) -> f64 {
        if self.analytic_mu == 0.0 {
            self.fock_mu.abs() / MU_B
        } else {
            ((self.fock_mu - self.analytic_mu) / self.analytic_mu).abs()
        }
    }
}

pub fn fock_table(atoms: &[usize], thetas: &[f64], g_factor: f64) -> Result<Vec<FockRow>> {
    let mut rows = Vec::with_capacity(atoms.len() * thetas.len());
    for &n in atoms {
        let space = FockSpace::new(n, 1)?;
        for &theta in thetas {
            rows.push(FockRow {
                atoms: n,
                theta,
                fock_mu: fock_moment(&space, theta, g_factor),
                analytic_mu: PolaritonState::from_theta(theta, g_factor)?.mu_pol,
            });
        }
    }
    Ok(rows)
}

/// Prints and saves the comparison table; returns it so the caller can judge it.
pub fn fock_check(
    atoms: &[usize],
    thetas: &[f64],
    g_factor: f64,
    out: &Path,
) -> Result<Vec<FockRow>> {
    let rows = fock_table(atoms, thetas, g_factor)?;
    println!(
        "{:>5} {:>10} {:>22} {:>22} {:>10}",
        "atoms", "theta", "fock mu (J/T)", "analytic mu (J/T)", "rel err"
    );
    for r in &rows {
        println!(
            "{:>5} {:>10.6} {:>22.15e} {:>22.15e} {:>10.2e}",
            r.atoms,
            r.theta,
            r.fock_mu,
            r.analytic_mu,
            r.relative_error()
        );
    }
    write_csv(
        &out.join("fock.csv"),
        &FOCK_HEADER,
        rows.iter().map(|r| {
            vec![
                r.atoms as f64,
                r.theta,
                r.fock_mu,
                r.analytic_mu,
                r.relative_error(),
            ]
        }),
    )?;
    Ok(rows)
}

/// Saves the scenario actually used next to the outputs so the run can be repeated.
pub fn save_scenario(s: &Scenario, out: &Path) -> Result<PathBuf> {
    let path = out.join("scenario.cfg");
    write_atomic(&path, s.serialize().as_bytes())
        .with_context(|| format!("saving {}", path.display()))?;
    Ok(path)
}
