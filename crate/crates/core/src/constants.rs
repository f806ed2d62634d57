//! Physical constants (CODATA 2018, SI).

/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.274_010_078_3e-24;

/// Natural linewidth of the Rb D1 line, rad/s.
pub const RB_D1_GAMMA: f64 = 2.0 * core::f64::consts::PI * 5.7e6;
