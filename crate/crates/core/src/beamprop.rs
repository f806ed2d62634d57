//! Wave-optics picture: paraxial split-step propagation of the signal beam across the cell.
//!
//! The field lives on a uniform, power-of-two transverse grid centred on the beam axis
//! (`x_j = (j − (N−1)/2)·dx`, symmetric about zero). Each step applies half a step of
//! free-space diffraction in the spectral domain, the full medium step
//! `exp(i k (n(x)−1) dz − κ_abs(x) dz / 2)`, and another half step of diffraction.
//!
//! The deflection angle is read from the power-weighted transverse wavenumber `⟨k_x⟩ / k`
//! of the exit field, which is unaffected by diffraction spreading.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fft::{self, Fft};
use crate::fields::{detuning_profile, FieldMap};
use crate::medium::{refractive_index, MediumParams};
use crate::{Error, Result};

pub const MIN_SAMPLES_PER_WAIST: f64 = 32.0;
pub const MIN_STEPS: usize = 64;
pub const DEFAULT_STEPS: usize = 256;
pub const MAX_STEPS: usize = 1 << 14;
/// Default lever arm from the cell to the camera, m.
pub const DEFAULT_CAMERA_DISTANCE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    len: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(len: usize, spacing: f64) -> Result<Self> {
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "spacing",
                reason: "must be positive",
            });
        }
        Ok(Self { len, spacing })
    }

    /// Smallest grid resolving `waist` with 32 samples that also holds the beam after it has
    /// diffracted over `length` (window at least 12 exit radii and 4 entry diameters).
    pub fn for_beam(waist: f64, wavelength: f64, length: f64) -> Result<Self> {
        if !(waist > 0.0) {
            return Err(Error::InvalidParameter {
                name: "waist",
                reason: "must be positive",
            });
        }
        let rayleigh = PI * waist * waist / wavelength;
        let exit_radius = waist * libm::sqrt(1.0 + (length / rayleigh) * (length / rayleigh));
        let window = (12.0 * exit_radius).max(8.0 * waist);
        let spacing = waist / MIN_SAMPLES_PER_WAIST;
        let len = ((window / spacing) as usize).next_power_of_two();
        Self::new(len, spacing)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn window(&self) -> f64 {
        self.len as f64 * self.spacing
    }

    pub fn positions(&self) -> Vec<f64> {
        let centre = 0.5 * (self.len as f64 - 1.0);
        (0..self.len)
            .map(|j| (j as f64 - centre) * self.spacing)
            .collect()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        fft::frequencies(self.len, self.spacing)
    }

    pub fn check_beam(&self, waist: f64) -> Result<()> {
        let samples_per_waist = waist / self.spacing;
        if samples_per_waist < MIN_SAMPLES_PER_WAIST {
            return Err(Error::GridTooCoarse { samples_per_waist });
        }
        let needed = 8.0 * waist;
        if self.window() < needed {
            return Err(Error::WindowTooSmall {
                window: self.window(),
                needed,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransverseField {
    pub grid: Grid,
    pub amplitude: Vec<Complex64>,
    /// Propagation coordinate, m.
    pub z: f64,
    pub wavelength: f64,
}

impl TransverseField {
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// `∫|E|² dx`.
    pub fn power(&self) -> f64 {
        self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.spacing
    }

    pub fn centroid(&self) -> f64 {
        let x = self.grid.positions();
        let weighted: f64 = self
            .amplitude
            .iter()
            .zip(&x)
            .map(|(a, x)| a.norm_sqr() * x)
            .sum();
        weighted * self.grid.spacing / self.power()
    }

    /// Intensity-weighted variance about the centroid, m².
    pub fn second_moment(&self) -> f64 {
        let centroid = self.centroid();
        let x = self.grid.positions();
        let weighted: f64 = self
            .amplitude
            .iter()
            .zip(&x)
            .map(|(a, x)| a.norm_sqr() * (x - centroid) * (x - centroid))
            .sum();
        weighted * self.grid.spacing / self.power()
    }

    /// Power-weighted transverse wavenumber `⟨k_x⟩`, 1/m.
    pub fn mean_wavenumber(&self) -> f64 {
        let mut spectrum = self.amplitude.clone();
        Fft::new(self.grid.len)
            .expect("grid length is a power of two")
            .forward(&mut spectrum);
        let (weighted, total) = spectrum
            .iter()
            .zip(self.grid.wavenumbers())
            .fold((0.0, 0.0), |(w, t), (a, k)| {
                (w + a.norm_sqr() * k, t + a.norm_sqr())
            });
        weighted / total
    }
}

/// Gaussian beam `E(x) ∝ exp(−x²/w²)` normalised to `power`.
pub fn gaussian_input(
    waist: f64,
    power: f64,
    grid: Grid,
    wavelength: f64,
) -> Result<TransverseField> {
    if !(waist > 0.0) {
        return Err(Error::InvalidParameter {
            name: "waist",
            reason: "must be positive",
        });
    }
    if !(power > 0.0) {
        return Err(Error::InvalidParameter {
            name: "power",
            reason: "must be positive",
        });
    }
    grid.check_beam(waist)?;
    let mut field = TransverseField {
        grid,
        amplitude: grid
            .positions()
            .iter()
            .map(|x| Complex64::new(libm::exp(-x * x / (waist * waist)), 0.0))
            .collect(),
        z: 0.0,
        wavelength,
    };
    let scale = libm::sqrt(power / field.power());
    field.amplitude.iter_mut().for_each(|a| *a *= scale);
    Ok(field)
}

/// Transverse medium profile sampled on the grid: `n − 1` and κ_abs (1/m).
#[derive(Debug, Clone, PartialEq)]
pub struct IndexProfile {
    pub excess: Vec<f64>,
    pub absorption: Vec<f64>,
}

impl IndexProfile {
    pub fn vacuum(grid: &Grid) -> Self {
        Self {
            excess: alloc::vec![0.0; grid.len()],
            absorption: alloc::vec![0.0; grid.len()],
        }
    }
}

/// Index profile of the cell with the on-axis two-photon detuning set to `delta_laser`.
pub fn medium_profile(
    medium: &MediumParams,
    fmap: &FieldMap,
    delta_laser: f64,
    grid: &Grid,
) -> Result<IndexProfile> {
    medium.validate()?;
    fmap.check_window(0.5 * grid.window())?;
    let deltas = detuning_profile(fmap, medium.g_factor, delta_laser, &grid.positions());
    let mut profile = IndexProfile::vacuum(grid);
    for (i, delta) in deltas.into_iter().enumerate() {
        let index = refractive_index(medium, delta)?;
        profile.excess[i] = index.excess;
        profile.absorption[i] = index.absorption;
    }
    Ok(profile)
}

/// Symmetric split-step propagation over `length` in exactly `n_steps` steps.
pub fn propagate(
    field: &TransverseField,
    profile: &IndexProfile,
    length: f64,
    n_steps: usize,
) -> TransverseField {
    let grid = field.grid;
    let k = field.wavenumber();
    let dz = length / n_steps as f64;
    let fft = Fft::new(grid.len()).expect("grid length is a power of two");
    let half: Vec<Complex64> = grid
        .wavenumbers()
        .iter()
        .map(|kx| Complex64::from_polar(1.0, -kx * kx * dz / (4.0 * k)))
        .collect();
    let full: Vec<Complex64> = half.iter().map(|h| h * h).collect();
    let medium: Vec<Complex64> = profile
        .excess
        .iter()
        .zip(&profile.absorption)
        .map(|(excess, absorption)| {
            Complex64::from_polar(libm::exp(-0.5 * absorption * dz), k * excess * dz)
        })
        .collect();

    let mut amplitude = field.amplitude.clone();
    fft.forward(&mut amplitude);
    mul_assign(&mut amplitude, &half);
    for step in 0..n_steps {
        fft.inverse(&mut amplitude);
        mul_assign(&mut amplitude, &medium);
        fft.forward(&mut amplitude);
        mul_assign(
            &mut amplitude,
            if step + 1 == n_steps { &half } else { &full },
        );
    }
    fft.inverse(&mut amplitude);

    TransverseField {
        grid,
        amplitude,
        z: field.z + length,
        wavelength: field.wavelength,
    }
}

fn mul_assign(values: &mut [Complex64], factors: &[Complex64]) {
    values.iter_mut().zip(factors).for_each(|(v, f)| *v *= f);
}

/// [`propagate`] with step doubling until the exit centroid moves by at most 1 %.
pub fn propagate_converged(
    field: &TransverseField,
    profile: &IndexProfile,
    length: f64,
    n_steps: usize,
) -> Result<TransverseField> {
    if n_steps < MIN_STEPS {
        return Err(Error::InvalidParameter {
            name: "n_steps",
            reason: "must be at least 64",
        });
    }
    let floor = 1e-9 * field.grid.window();
    let mut steps = n_steps;
    let mut coarse = propagate(field, profile, length, steps);
    while steps < MAX_STEPS {
        steps *= 2;
        let fine = propagate(field, profile, length, steps);
        if fine.power() <= 0.0 {
            return Err(Error::ZeroPower);
        }
        let (a, b) = (coarse.centroid(), fine.centroid());
        if libm::fabs(b - a) <= 0.01 * libm::fabs(b) + floor {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::StepNotConverged { n_steps: steps })
}

/// Propagates `field` through the cell of `medium` in the field map `fmap`.
pub fn propagate_cell(
    field: &TransverseField,
    medium: &MediumParams,
    fmap: &FieldMap,
    delta_laser: f64,
    n_steps: usize,
) -> Result<TransverseField> {
    let profile = medium_profile(medium, fmap, delta_laser, &field.grid)?;
    propagate_converged(field, &profile, medium.cell_length, n_steps)
}

/// Exit centroid (m) and deflection angle (rad) relative to the entry beam.
pub fn centroid_and_angle(entry: &TransverseField, exit: &TransverseField) -> Result<(f64, f64)> {
    let (p_in, p_out) = (entry.power(), exit.power());
    if !(p_in > 0.0 && p_out > 0.0) {
        return Err(Error::ZeroPower);
    }
    let angle = (exit.mean_wavenumber() - entry.mean_wavenumber()) / exit.wavenumber();
    Ok((exit.centroid(), angle))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeflectionRecord {
    /// On-axis two-photon detuning, rad/s.
    pub delta_laser: f64,
    /// Exit power over entry power.
    pub transmission: f64,
    /// m.
    pub centroid_exit: f64,
    /// rad.
    pub angle: f64,
    /// Beam position on the camera, `centroid_exit + angle · D`, m.
    pub camera_displacement: f64,
}

/// Input beam and numerical settings shared by every point of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSetup {
    pub waist: f64,
    pub power: f64,
    pub grid: Grid,
    pub camera_distance: f64,
    pub n_steps: usize,
}

impl BeamSetup {
    pub fn new(waist: f64, power: f64, medium: &MediumParams) -> Result<Self> {
        Ok(Self {
            waist,
            power,
            grid: Grid::for_beam(waist, medium.lambda_s, medium.cell_length)?,
            camera_distance: DEFAULT_CAMERA_DISTANCE,
            n_steps: DEFAULT_STEPS,
        })
    }

    pub fn input(&self, medium: &MediumParams) -> Result<TransverseField> {
        gaussian_input(self.waist, self.power, self.grid, medium.lambda_s)
    }
}

/// One point of a deflection spectrum.
pub fn deflection_record(
    medium: &MediumParams,
    fmap: &FieldMap,
    beam: &BeamSetup,
    delta_laser: f64,
) -> Result<DeflectionRecord> {
    let entry = beam.input(medium)?;
    let exit = propagate_cell(&entry, medium, fmap, delta_laser, beam.n_steps)?;
    let (centroid_exit, angle) = centroid_and_angle(&entry, &exit)?;
    Ok(DeflectionRecord {
        delta_laser,
        transmission: (exit.power() / entry.power()).min(1.0),
        centroid_exit,
        angle,
        camera_displacement: centroid_exit + angle * beam.camera_distance,
    })
}

/// `points` detunings evenly spaced over `±span_factor` transparency windows.
pub fn spectrum_detunings(medium: &MediumParams, span_factor: f64, points: usize) -> Vec<f64> {
    let span = span_factor * medium.eit_window();
    if points < 2 {
        return alloc::vec![0.0];
    }
    (0..points)
        .map(|i| -span + 2.0 * span * i as f64 / (points - 1) as f64)
        .collect()
}

/// Checks that `deltas` reaches at least three transparency windows on both sides.
pub fn check_spectrum_range(medium: &MediumParams, deltas: &[f64]) -> Result<()> {
    let needed = 3.0 * medium.eit_window();
    let lo = deltas.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = deltas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // allow for rounding in evenly spaced grids
    if lo > -needed * (1.0 - 1e-9) || hi < needed * (1.0 - 1e-9) {
        return Err(Error::InvalidParameter {
            name: "delta range",
            reason: "must span at least ±3 EIT windows",
        });
    }
    Ok(())
}

pub fn deflection_spectrum(
    medium: &MediumParams,
    fmap: &FieldMap,
    beam: &BeamSetup,
    deltas: &[f64],
) -> Result<Vec<DeflectionRecord>> {
    check_spectrum_range(medium, deltas)?;
    deltas
        .iter()
        .map(|&delta| deflection_record(medium, fmap, beam, delta))
        .collect()
}

/// Number of sign changes along a sequence, ignoring entries with `|v| ≤ floor`.
pub fn sign_reversals(values: &[f64], floor: f64) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for &v in values {
        if libm::fabs(v) <= floor {
            continue;
        }
        let positive = v > 0.0;
        if let Some(prev) = last {
            if prev != positive {
                count += 1;
            }
        }
        last = Some(positive);
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const LAMBDA: f64 = 795e-9;

    fn narrow() -> (Grid, f64) {
        let waist = 50e-6;
        (Grid::for_beam(waist, LAMBDA, 0.05).unwrap(), waist)
    }

    #[test]
    fn grid_is_symmetric() {
        let grid = Grid::new(8, 0.5).unwrap();
        let x = grid.positions();
        assert_eq!(x[0], -x[7]);
        assert_eq!(x[3], -0.25);
        assert!(Grid::new(12, 1.0).is_err());
    }

    #[test]
    fn gaussian_centroid_and_power() {
        let (grid, waist) = narrow();
        let field = gaussian_input(waist, 2.5, grid, LAMBDA).unwrap();
        assert!(field.centroid().abs() < 1e-12 * grid.window());
        assert_relative_eq!(field.power(), 2.5, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_second_moment() {
        // ∫x² exp(−2x²/w²) / ∫exp(−2x²/w²) = w²/4
        let (grid, waist) = narrow();
        let field = gaussian_input(waist, 1.0, grid, LAMBDA).unwrap();
        assert_relative_eq!(
            field.second_moment(),
            waist * waist / 4.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn coarse_grid_rejected() {
        let grid = Grid::new(256, 5e-6).unwrap();
        assert!(matches!(
            gaussian_input(50e-6, 1.0, grid, LAMBDA),
            Err(Error::GridTooCoarse { .. })
        ));
        let small = Grid::new(64, 1e-6).unwrap();
        assert!(matches!(
            gaussian_input(50e-6, 1.0, small, LAMBDA),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn linear_index_ramp_acts_as_prism() {
        let (grid, waist) = narrow();
        let entry = gaussian_input(waist, 1.0, grid, LAMBDA).unwrap();
        let slope = 3e-4;
        let profile = IndexProfile {
            excess: grid.positions().iter().map(|x| slope * x).collect(),
            absorption: alloc::vec![0.0; grid.len()],
        };
        let exit = propagate_converged(&entry, &profile, 0.05, DEFAULT_STEPS).unwrap();
        let (_, angle) = centroid_and_angle(&entry, &exit).unwrap();
        assert_relative_eq!(angle, slope * 0.05, max_relative = 5e-3);
    }

    #[test]
    fn tilted_beam_angle() {
        let waist = 2e-3;
        let grid = Grid::new(2048, waist / 32.0).unwrap();
        let tilt = 1e-4;
        let mut beam = gaussian_input(waist, 1.0, grid, LAMBDA).unwrap();
        let k = beam.wavenumber();
        let flat = beam.clone();
        for (a, x) in beam.amplitude.iter_mut().zip(grid.positions()) {
            *a *= Complex64::from_polar(1.0, k * tilt * x);
        }
        let (_, angle) = centroid_and_angle(&flat, &beam).unwrap();
        assert_relative_eq!(angle, tilt, max_relative = 1e-3);
    }

    #[test]
    fn periodic_plane_wave_angle() {
        let grid = Grid::new(1024, 1e-6).unwrap();
        let kx = 2.0 * PI * 5.0 / grid.window();
        let plane = TransverseField {
            grid,
            amplitude: grid
                .positions()
                .iter()
                .map(|x| Complex64::from_polar(1.0, kx * x))
                .collect(),
            z: 0.0,
            wavelength: LAMBDA,
        };
        let flat = TransverseField {
            amplitude: alloc::vec![Complex64::new(1.0, 0.0); 1024],
            ..plane.clone()
        };
        let (_, angle) = centroid_and_angle(&flat, &plane).unwrap();
        assert_relative_eq!(angle, kx / plane.wavenumber(), max_relative = 1e-10);
    }

    #[test]
    fn zero_power_rejected() {
        let (grid, waist) = narrow();
        let entry = gaussian_input(waist, 1.0, grid, LAMBDA).unwrap();
        let dark = TransverseField {
            amplitude: alloc::vec![Complex64::new(0.0, 0.0); grid.len()],
            ..entry.clone()
        };
        assert_eq!(centroid_and_angle(&entry, &dark), Err(Error::ZeroPower));
    }

    #[test]
    fn free_diffraction_preserves_power_and_axis() {
        let (grid, waist) = narrow();
        let entry = gaussian_input(waist, 1.0, grid, LAMBDA).unwrap();
        let exit = propagate(&entry, &IndexProfile::vacuum(&grid), 0.05, 64);
        assert_relative_eq!(exit.power(), 1.0, max_relative = 1e-12);
        assert!(exit.centroid().abs() < 1e-15);
        // w(z)² = w²(1 + (z/z_R)²) → second moment w(z)²/4
        let rayleigh = PI * waist * waist / LAMBDA;
        let expected = waist * waist * (1.0 + (0.05 / rayleigh).powi(2)) / 4.0;
        assert_relative_eq!(exit.second_moment(), expected, max_relative = 1e-6);
    }

    #[test]
    fn too_few_steps_rejected() {
        let (grid, waist) = narrow();
        let entry = gaussian_input(waist, 1.0, grid, LAMBDA).unwrap();
        assert!(propagate_converged(&entry, &IndexProfile::vacuum(&grid), 0.05, 32).is_err());
    }

    #[test]
    fn counts_sign_reversals() {
        assert_eq!(sign_reversals(&[-1.0, -0.5, 0.0, 2.0, 3.0, -1.0], 0.0), 2);
        assert_eq!(sign_reversals(&[1.0, 1e-12, 1.0], 1e-9), 0);
    }
}
