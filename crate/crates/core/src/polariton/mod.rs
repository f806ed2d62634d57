//! Particle picture: the dark-state polariton and its Stern-Gerlach deflection.
//!
//! The mixing angle `tan Θ = g√N / Ω` fixes everything: the group velocity `c cos²Θ`,
//! the magnetic moment `2 g_F μ_B sin²Θ` carried by the spin-wave admixture, the
//! g-factor `2 g_F sin²Θ` and the gyromagnetic ratio `−μ_pol / ħ` (the polariton carries
//! one unit ħ of angular momentum).
//!
//! [`fock`] checks the moment formula by brute force in a truncated Fock space.

pub mod fock;

use core::f64::consts::FRAC_PI_2;

use crate::constants::{C, HBAR, MU_B};
use crate::{Error, Result};

/// Largest deflection still treated as small.
pub const SMALL_ANGLE_LIMIT: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonState {
    /// Mixing angle Θ, rad, in `[0, π/2)`.
    pub theta: f64,
    /// Group velocity, m/s.
    pub v_g: f64,
    /// Effective magnetic moment, J/T.
    pub mu_pol: f64,
    pub g_pol: f64,
    /// Gyromagnetic ratio, rad/(s·T).
    pub gyro: f64,
}

impl PolaritonState {
    fn from_mixing(theta: f64, cos2: f64, sin2: f64, g_factor: f64) -> Self {
        let mu_pol = 2.0 * g_factor * MU_B * sin2;
        Self {
            theta,
            v_g: C * cos2,
            mu_pol,
            g_pol: 2.0 * g_factor * sin2,
            gyro: -mu_pol / HBAR,
        }
    }

    pub fn from_theta(theta: f64, g_factor: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: "mixing angle must lie in [0, π/2)",
            });
        }
        let s = libm::sin(theta);
        let c = libm::cos(theta);
        Ok(Self::from_mixing(theta, c * c, s * s, g_factor))
    }

    /// Inverts `v_g = c cos²Θ`.
    pub fn from_group_velocity(v_g: f64, g_factor: f64) -> Result<Self> {
        if !(v_g > 0.0 && v_g <= C) {
            return Err(Error::InvalidParameter {
                name: "v_g",
                reason: "must lie in (0, c]",
            });
        }
        let cos2 = v_g / C;
        let theta = libm::acos(libm::sqrt(cos2));
        Ok(Self::from_mixing(theta, cos2, 1.0 - cos2, g_factor))
    }
}

/// Polariton for control Rabi frequency `omega` and collective coupling `g_n` (both rad/s).
pub fn from_coupling(omega: f64, g_n: f64, g_factor: f64) -> Result<PolaritonState> {
    if omega == 0.0 {
        return Err(Error::FullyAtomic);
    }
    if !(omega > 0.0) || !(g_n >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "coupling",
            reason: "Ω must be positive and g√N non-negative",
        });
    }
    // cos² and sin² from the ratio directly; 1 − cos²Θ loses digits when Θ → π/2
    let ratio = g_n / omega;
    let cos2 = 1.0 / (1.0 + ratio * ratio);
    let sin2 = ratio * ratio * cos2;
    Ok(PolaritonState::from_mixing(
        libm::atan(ratio),
        cos2,
        sin2,
        g_factor,
    ))
}

/// Stern-Gerlach deflection angle `α = (L / v_g) · (μ_pol / ħk) · dB_z/dx`.
pub fn sg_deflection(ps: &PolaritonState, medium_length: f64, grad_x: f64, k: f64) -> Result<f64> {
    if !(ps.v_g > 0.0) {
        return Err(Error::InvalidParameter {
            name: "v_g",
            reason: "must be positive",
        });
    }
    let interaction_time = medium_length / ps.v_g;
    let momentum = HBAR * k;
    let angle = interaction_time * ps.mu_pol * grad_x / momentum;
    if libm::fabs(angle) >= SMALL_ANGLE_LIMIT {
        return Err(Error::LargeAngle { angle });
    }
    Ok(angle)
}

/// Solves the deflection formula for the moment: `μ = α ħk v_g / (L dB_z/dx)`.
pub fn extract_moment(
    alpha: f64,
    v_g: f64,
    medium_length: f64,
    grad_x: f64,
    k: f64,
) -> Result<f64> {
    if grad_x == 0.0 {
        return Err(Error::UndefinedExtraction("zero field gradient"));
    }
    if !(v_g > 0.0) {
        return Err(Error::UndefinedExtraction("non-positive group velocity"));
    }
    Ok(alpha * HBAR * k * v_g / (medium_length * grad_x))
}
