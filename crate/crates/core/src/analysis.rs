//! Group-velocity sweeps and magnetic-moment extraction.
//!
//! A sweep varies the control Rabi frequency at fixed collective coupling, which tunes the
//! group velocity. Each row measures `v_g` from a pulse delay and the deflection angle on
//! two-photon resonance from the wave-optics propagation, exactly the two measurements the
//! moment extraction consumes.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::beamprop::{deflection_record, BeamSetup};
use crate::constants::MU_B;
use crate::fields::FieldMap;
use crate::medium::{index_slope, MediumParams};
use crate::polariton::{extract_moment, from_coupling, sg_deflection};
use crate::pulse::measure_vg;
use crate::stats::{linear_fit, mean, standard_error, LinearFit};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Base medium; `rabi_control` is replaced row by row.
    pub medium: MediumParams,
    pub fmap: FieldMap,
    pub beam: BeamSetup,
    /// Pulse duration used for the group-velocity measurement, s.
    pub sigma_t: f64,
    pub repeats: usize,
    /// Standard deviation of Gaussian noise added to the camera displacement, m.
    pub displacement_noise: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Control Rabi frequency, rad/s.
    pub rabi_control: f64,
    /// Group velocity from the pulse delay, m/s.
    pub v_g: f64,
    pub v_g_sigma: f64,
    /// Mean deflection angle over the repeats, rad.
    pub angle: f64,
    /// Standard deviation of the mean of the angle, rad.
    pub angle_sigma: f64,
    /// Mean camera displacement, m.
    pub camera_displacement: f64,
    pub transmission: f64,
    /// Prism angle `L · dn/dx` for a point-like beam on the axis, rad.
    pub local_angle: f64,
    /// `1 − angle / local_angle` for the noiseless angle.
    pub sublinearity: f64,
    /// Particle-picture prediction for the same Ω and g√N, rad.
    pub polariton_angle: f64,
}

impl SweepRow {
    pub fn inverse_velocity(&self) -> f64 {
        1.0 / self.v_g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepMetadata {
    /// T/m.
    pub grad_x: f64,
    /// m.
    pub cell_length: f64,
    /// m.
    pub waist: f64,
    pub g_factor: f64,
    /// Signal wavenumber, 1/m.
    pub wavenumber: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by `1/v_g` ascending.
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    pub fn from_rows(mut rows: Vec<SweepRow>, metadata: SweepMetadata) -> Self {
        rows.sort_by(|a, b| a.inverse_velocity().total_cmp(&b.inverse_velocity()));
        Self { rows, metadata }
    }

    /// Least-squares line of deflection angle against `1/v_g`.
    pub fn linearity(&self) -> LinearFit {
        let x: Vec<f64> = self.rows.iter().map(SweepRow::inverse_velocity).collect();
        let y: Vec<f64> = self.rows.iter().map(|r| r.angle).collect();
        linear_fit(&x, &y)
    }

    /// Copy with every deflection (and its spread) multiplied by `factor`.
    pub fn scaled_angles(&self, factor: f64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| SweepRow {
                angle: r.angle * factor,
                angle_sigma: r.angle_sigma * factor,
                ..*r
            })
            .collect();
        Self {
            rows,
            metadata: self.metadata,
        }
    }
}

impl SweepConfig {
    pub fn metadata(&self) -> SweepMetadata {
        SweepMetadata {
            grad_x: self.fmap.grad_x,
            cell_length: self.medium.cell_length,
            waist: self.beam.waist,
            g_factor: self.medium.g_factor,
            wavenumber: self.medium.wavenumber(),
        }
    }
}

/// One sweep row. `row_index` selects the noise stream, so rows can be evaluated in any
/// order (or concurrently) with identical results.
pub fn sweep_row(cfg: &SweepConfig, rabi_control: f64, row_index: usize) -> Result<SweepRow> {
    if cfg.repeats == 0 {
        return Err(Error::InvalidParameter {
            name: "repeats",
            reason: "must be at least 1",
        });
    }
    let medium = MediumParams {
        rabi_control,
        ..cfg.medium
    };
    let measured = measure_vg(&medium, cfg.sigma_t)?;
    let record = deflection_record(&medium, &cfg.fmap, &cfg.beam, 0.0)?;

    let distance = cfg.beam.camera_distance;
    let mut angles = Vec::with_capacity(cfg.repeats);
    let mut displacements = Vec::with_capacity(cfg.repeats);
    if cfg.displacement_noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(row_index as u64);
        let noise =
            Normal::new(0.0, cfg.displacement_noise).map_err(|_| Error::InvalidParameter {
                name: "displacement_noise",
                reason: "must be finite",
            })?;
        for _ in 0..cfg.repeats {
            let displacement = record.camera_displacement + noise.sample(&mut rng);
            displacements.push(displacement);
            angles.push((displacement - record.centroid_exit) / distance);
        }
    } else {
        angles.resize(cfg.repeats, record.angle);
        displacements.resize(cfg.repeats, record.camera_displacement);
    }

    let slope = cfg.fmap.detuning_gradient(medium.g_factor);
    let local_angle = medium.cell_length * slope * index_slope(&medium, 0.0)?;
    let polariton = from_coupling(rabi_control, medium.coupling_collective, medium.g_factor)?;
    let polariton_angle = sg_deflection(
        &polariton,
        medium.cell_length,
        cfg.fmap.grad_x,
        medium.wavenumber(),
    )?;
    Ok(SweepRow {
        rabi_control,
        v_g: measured.v_g,
        v_g_sigma: measured.uncertainty,
        angle: mean(&angles),
        angle_sigma: standard_error(&angles),
        camera_displacement: mean(&displacements),
        transmission: record.transmission,
        local_angle,
        sublinearity: if local_angle != 0.0 {
            1.0 - record.angle / local_angle
        } else {
            0.0
        },
        polariton_angle,
    })
}

pub fn run_vg_sweep(cfg: &SweepConfig, rabi_controls: &[f64]) -> Result<SweepResult> {
    if rabi_controls.is_empty() {
        return Err(Error::EmptySweep);
    }
    let rows = rabi_controls
        .iter()
        .enumerate()
        .map(|(i, &omega)| sweep_row(cfg, omega, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_rows(rows, cfg.metadata()))
}

/// Sweep built from the particle-picture deflection formula alone, for a given moment.
pub fn polariton_sweep(
    mu_pol: f64,
    velocities: &[f64],
    metadata: SweepMetadata,
) -> Result<SweepResult> {
    let rows = velocities
        .iter()
        .map(|&v_g| {
            let ps = crate::polariton::PolaritonState {
                mu_pol,
                ..crate::polariton::PolaritonState::from_group_velocity(v_g, metadata.g_factor)?
            };
            let angle = sg_deflection(
                &ps,
                metadata.cell_length,
                metadata.grad_x,
                metadata.wavenumber,
            )?;
            Ok(SweepRow {
                rabi_control: f64::NAN,
                v_g,
                v_g_sigma: 0.0,
                angle,
                angle_sigma: 0.0,
                camera_displacement: f64::NAN,
                transmission: 1.0,
                local_angle: angle,
                sublinearity: 0.0,
                polariton_angle: angle,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_rows(rows, metadata))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    /// Unweighted mean of the per-row moments, J/T.
    pub mu: f64,
    /// `2 g_F μ_B / mu`.
    pub ratio: f64,
    pub per_row: Vec<f64>,
}

/// Solves the deflection formula row by row and averages without weights.
pub fn extract_moment_from_sweep(sweep: &SweepResult) -> Result<MomentEstimate> {
    if sweep.rows.is_empty() {
        return Err(Error::EmptySweep);
    }
    let m = &sweep.metadata;
    let per_row = sweep
        .rows
        .iter()
        .map(|r| extract_moment(r.angle, r.v_g, m.cell_length, m.grad_x, m.wavenumber))
        .collect::<Result<Vec<_>>>()?;
    let mu = mean(&per_row);
    Ok(MomentEstimate {
        mu,
        ratio: 2.0 * m.g_factor * MU_B / mu,
        per_row,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn metadata() -> SweepMetadata {
        SweepMetadata {
            grad_x: 9.1e-6,
            cell_length: 0.05,
            waist: 50e-6,
            g_factor: 0.5,
            wavenumber: 2.0 * core::f64::consts::PI / 795e-9,
        }
    }

    #[test]
    fn forward_sweep_round_trips() {
        let sweep = polariton_sweep(MU_B, &[150.0, 300.0, 600.0], metadata()).unwrap();
        let estimate = extract_moment_from_sweep(&sweep).unwrap();
        assert_relative_eq!(estimate.mu, MU_B, max_relative = 1e-14);
        assert_relative_eq!(estimate.ratio, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn rows_sorted_by_inverse_velocity() {
        let sweep = polariton_sweep(MU_B, &[150.0, 600.0, 300.0], metadata()).unwrap();
        let v: Vec<f64> = sweep.rows.iter().map(|r| r.v_g).collect();
        assert_eq!(v, [600.0, 300.0, 150.0]);
    }

    #[test]
    fn empty_sweep_rejected() {
        let sweep = SweepResult::from_rows(Vec::new(), metadata());
        assert_eq!(
            extract_moment_from_sweep(&sweep).unwrap_err(),
            Error::EmptySweep
        );
    }

    #[test]
    fn zero_gradient_rejected() {
        let sweep = polariton_sweep(MU_B, &[300.0], metadata()).unwrap();
        let flat = SweepResult {
            metadata: SweepMetadata {
                grad_x: 0.0,
                ..sweep.metadata
            },
            ..sweep
        };
        assert!(matches!(
            extract_moment_from_sweep(&flat),
            Err(Error::UndefinedExtraction(_))
        ));
    }
}
