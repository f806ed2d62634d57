//! Group velocity measured the way the experiment does it: send a Gaussian pulse through the
//! cell and time the delay of its peak with a Gaussian fit.
//!
//! Propagation is spectral and exact for the linear medium: the envelope component at offset
//! `δ'` from the carrier picks up `exp(i [(ω_s+δ') n(δ+δ') − ω_s n(δ)] L/c − κ_abs(δ+δ') L/2)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::constants::C;
use crate::fft::{self, Fft};
use crate::fit::{fit_gaussian_peak, GaussianFit};
use crate::medium::{index_slope, refractive_index, MediumParams};
use crate::{Error, Result};

/// Spectral width (1/σ_t) over EIT window above which the pulse is no longer adiabatic.
pub const ADIABATIC_WARNING: f64 = 0.2;
pub const MIN_SAMPLES: usize = 4096;
/// Default intensity rms duration σ_t, s.
pub const DEFAULT_SIGMA_T: f64 = 10e-3;
pub const DEFAULT_SAMPLES_PER_SIGMA: f64 = 16.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PulseTrace {
    /// s.
    pub t: Vec<f64>,
    /// W.
    pub intensity: Vec<f64>,
    pub fit_peak_time: f64,
    pub fit_sigma: f64,
    pub fit: GaussianFit,
}

impl PulseTrace {
    fn fitted(t: Vec<f64>, intensity: Vec<f64>) -> Result<Self> {
        let fit = fit_gaussian_peak(&t, &intensity)?;
        Ok(Self {
            t,
            intensity,
            fit_peak_time: fit.peak_time,
            fit_sigma: fit.sigma,
            fit,
        })
    }

    pub fn energy(&self) -> f64 {
        let dt = self.t[1] - self.t[0];
        self.intensity.iter().sum::<f64>() * dt
    }

    /// Time of the largest sample.
    pub fn argmax_time(&self) -> f64 {
        let (i, _) =
            self.intensity
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                    if v > best.1 {
                        (i, v)
                    } else {
                        best
                    }
                });
        self.t[i]
    }

    pub fn sample_spacing(&self) -> f64 {
        self.t[1] - self.t[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulsePropagation {
    pub entry: PulseTrace,
    pub exit: PulseTrace,
    /// Pulse spectral width 1/σ_t over the EIT window (zero when the medium is vacuum).
    pub adiabaticity: f64,
}

impl PulsePropagation {
    pub fn delay(&self) -> f64 {
        self.exit.fit_peak_time - self.entry.fit_peak_time
    }
}

fn adiabaticity(medium: &MediumParams, sigma_t: f64) -> f64 {
    if medium.coupling_collective == 0.0 {
        0.0
    } else {
        (1.0 / sigma_t) / medium.eit_window()
    }
}

/// Propagates a Gaussian pulse of intensity rms width `sigma_t` and unit peak power over
/// `length` of `medium`, carrier at two-photon detuning `delta_laser`.
pub fn propagate_pulse(
    medium: &MediumParams,
    delta_laser: f64,
    sigma_t: f64,
    length: f64,
) -> Result<PulsePropagation> {
    propagate_pulse_sampled(
        medium,
        delta_laser,
        sigma_t,
        length,
        DEFAULT_SAMPLES_PER_SIGMA,
    )
}

/// [`propagate_pulse`] with an explicit time resolution (samples per σ_t, at least 4).
pub fn propagate_pulse_sampled(
    medium: &MediumParams,
    delta_laser: f64,
    sigma_t: f64,
    length: f64,
    samples_per_sigma: f64,
) -> Result<PulsePropagation> {
    medium.validate()?;
    if !(samples_per_sigma >= 4.0) {
        return Err(Error::InvalidParameter {
            name: "samples_per_sigma",
            reason: "must be at least 4",
        });
    }
    if !(sigma_t > 0.0 && length > 0.0) {
        return Err(Error::InvalidParameter {
            name: "pulse",
            reason: "duration and length must be positive",
        });
    }
    let ratio = adiabaticity(medium, sigma_t);
    if ratio > 5.0 * ADIABATIC_WARNING {
        return Err(Error::PulseExceedsWindow { ratio });
    }
    if ratio > ADIABATIC_WARNING {
        log::warn!("pulse spectral width is {ratio:.2} of the EIT window; expect a biased delay");
    }

    let carrier = refractive_index(medium, delta_laser)?;
    let expected_delay =
        (length * (carrier.n + medium.omega_s() * index_slope(medium, delta_laser)?) / C).max(0.0);
    let start = -12.0 * sigma_t - expected_delay;
    let span = 24.0 * sigma_t + 3.0 * expected_delay;
    let samples = ((span * samples_per_sigma / sigma_t) as usize)
        .next_power_of_two()
        .max(MIN_SAMPLES);
    let dt = span / samples as f64;
    let t: Vec<f64> = (0..samples).map(|j| start + j as f64 * dt).collect();
    let envelope: Vec<Complex64> = t
        .iter()
        .map(|&tj| Complex64::new(libm::exp(-tj * tj / (4.0 * sigma_t * sigma_t)), 0.0))
        .collect();

    let fft = Fft::new(samples)?;
    let mut spectrum = envelope.clone();
    fft.forward(&mut spectrum);
    let omega_s = medium.omega_s();
    for (a, w) in spectrum.iter_mut().zip(fft::frequencies(samples, dt)) {
        // bin ω carries exp(+iωt) after the inverse transform, i.e. optical offset δ' = −ω
        let offset = -w;
        let index = refractive_index(medium, delta_laser + offset)?;
        let phase = (offset * index.n + omega_s * (index.excess - carrier.excess)) * length / C;
        *a *= Complex64::from_polar(libm::exp(-0.5 * index.absorption * length), phase);
    }
    fft.inverse(&mut spectrum);

    let entry = PulseTrace::fitted(t.clone(), envelope.iter().map(|a| a.norm_sqr()).collect())?;
    let exit = PulseTrace::fitted(t, spectrum.iter().map(|a| a.norm_sqr()).collect())?;
    Ok(PulsePropagation {
        entry,
        exit,
        adiabaticity: ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VgMeasurement {
    /// m/s.
    pub v_g: f64,
    /// One-sigma uncertainty from the fitted peak positions, m/s.
    pub uncertainty: f64,
    /// s.
    pub delay: f64,
    pub adiabaticity: f64,
}

/// Group velocity on two-photon resonance from the pulse delay across the cell.
pub fn measure_vg(medium: &MediumParams, sigma_t: f64) -> Result<VgMeasurement> {
    let run = propagate_pulse(medium, 0.0, sigma_t, medium.cell_length)?;
    let delay = run.delay();
    if !(delay > 0.0) {
        return Err(Error::InvalidParameter {
            name: "delay",
            reason: "pulse was not delayed",
        });
    }
    let v_g = medium.cell_length / delay;
    let timing = libm::hypot(
        run.entry.fit.peak_time_uncertainty,
        run.exit.fit.peak_time_uncertainty,
    );
    Ok(VgMeasurement {
        v_g,
        uncertainty: v_g * timing / delay,
        delay,
        adiabaticity: run.adiabaticity,
    })
}
