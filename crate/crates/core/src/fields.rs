//! Transverse magnetic field map and the two-photon detuning it imprints across the beam.

use alloc::vec::Vec;

use crate::constants::{HBAR, MU_B};
use crate::{Error, Result};

/// Bias field along the beam axis plus a uniform transverse gradient:
/// `B_z(x) = b0 + grad_x · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMap {
    /// Field on the beam axis, T.
    pub b0: f64,
    /// dB_z/dx, T/m.
    pub grad_x: f64,
}

impl Default for FieldMap {
    fn default() -> Self {
        Self {
            b0: 116e-7,
            grad_x: 9.1e-6,
        }
    }
}

impl FieldMap {
    pub fn field_at(&self, x: f64) -> f64 {
        self.b0 + self.grad_x * x
    }

    /// Checks that the field keeps its sign over `|x| ≤ half_width` when the bias is set.
    pub fn check_window(&self, half_width: f64) -> Result<()> {
        if self.b0 > 0.0 && libm::fabs(self.grad_x) * half_width >= self.b0 {
            return Err(Error::FieldSignChange);
        }
        Ok(())
    }

    /// Detuning slope across the beam, `2 g_F μ_B dB_z/dx / ħ`, rad/(s·m).
    pub fn detuning_gradient(&self, g_factor: f64) -> f64 {
        2.0 * g_factor * MU_B * self.grad_x / HBAR
    }

    pub fn reversed(self) -> Self {
        Self {
            grad_x: -self.grad_x,
            ..self
        }
    }
}

/// Zeeman shift of the two-photon detuning at `x`, `2 g_F μ_B B_z(x) / ħ`, rad/s.
pub fn zeeman_shift(f: &FieldMap, g_factor: f64, x: f64) -> f64 {
    2.0 * g_factor * MU_B * f.field_at(x) / HBAR
}

/// Two-photon detuning across `grid`, referenced so that the beam axis sits at `delta_laser`.
pub fn detuning_profile(f: &FieldMap, g_factor: f64, delta_laser: f64, grid: &[f64]) -> Vec<f64> {
    // the bias term cancels exactly against the x = 0 reference
    let slope = f.detuning_gradient(g_factor);
    grid.iter().map(|&x| delta_laser + slope * x).collect()
}
