//! Scenario files: flat `key = value` text, one setting per line.
//!
//! ```text
//! # 5 cm vapor cell
//! wavelength = 795 nm
//! gradient   = 9.1e-6 T/m
//! bias       = 116 mG
//! target_vg  = 290 m/s
//! ```
//!
//! Keys left out take their defaults. Unknown or repeated keys are errors, as is a
//! dimensioned value without a unit.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use slowlight_core::analysis::SweepConfig;
use slowlight_core::beamprop::{BeamSetup, DEFAULT_CAMERA_DISTANCE, DEFAULT_STEPS};
use slowlight_core::constants::RB_D1_GAMMA;
use slowlight_core::fields::FieldMap;
use slowlight_core::medium::{calibrate_to_vg, MediumParams};
use slowlight_core::pulse::DEFAULT_SIGMA_T;

use crate::units::{format_number, format_quantity, parse_quantity, Dimension, UnitError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: `{key}`: {err}")]
    Unit {
        line: usize,
        key: String,
        err: UnitError,
    },
    #[error("line {line}: `{key}`: {reason}")]
    Value {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("{path}: {err}")]
    Io { path: PathBuf, err: std::io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub wavelength: f64,
    pub cell_length: f64,
    pub rabi_control: f64,
    pub gamma_e: f64,
    pub gamma_c: f64,
    pub one_photon_detuning: f64,
    pub g_factor: f64,
    /// Group velocity on resonance that fixes the medium's coupling strength.
    pub target_vg: f64,

    pub bias: f64,
    pub gradient: f64,

    pub waist: f64,
    pub beam_power: f64,
    pub camera_distance: f64,
    pub steps: usize,

    /// Half-width of the detuning scan, in EIT windows.
    pub spectrum_span: f64,
    pub spectrum_points: usize,

    pub pulse_sigma: f64,
    pub pulse_detuning: f64,

    /// Control Rabi frequencies of the sweep, as multiples of `rabi_control`.
    pub sweep_rabi_factors: Vec<f64>,
    pub repeats: usize,
    pub displacement_noise: f64,

    pub seed: u64,
    pub out: PathBuf,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            wavelength: 795e-9,
            cell_length: 0.05,
            rabi_control: 2.0 * PI * 1e6,
            gamma_e: RB_D1_GAMMA,
            gamma_c: 2.0 * PI * 1e3,
            one_photon_detuning: 0.0,
            g_factor: 0.5,
            target_vg: 290.0,
            bias: 116e-7,
            gradient: 9.1e-6,
            // 2 mm beam diameter
            waist: 1e-3,
            beam_power: 1e-3,
            camera_distance: DEFAULT_CAMERA_DISTANCE,
            steps: DEFAULT_STEPS,
            spectrum_span: 4.0,
            spectrum_points: 121,
            pulse_sigma: DEFAULT_SIGMA_T,
            pulse_detuning: 0.0,
            sweep_rabi_factors: vec![0.7, 0.85, 1.0, 1.2, 1.45, 1.75, 2.1],
            repeats: 5,
            displacement_noise: 1e-6,
            seed: 1,
            out: PathBuf::from("out"),
        }
    }
}

enum Kind {
    Quantity(Dimension),
    Number,
    Count,
    Seed,
    List,
    Path,
}

const KEYS: &[(&str, Kind)] = &[
    ("wavelength", Kind::Quantity(Dimension::Length)),
    ("cell_length", Kind::Quantity(Dimension::Length)),
    ("rabi_control", Kind::Quantity(Dimension::AngularFrequency)),
    ("gamma_e", Kind::Quantity(Dimension::AngularFrequency)),
    ("gamma_c", Kind::Quantity(Dimension::AngularFrequency)),
    (
        "one_photon_detuning",
        Kind::Quantity(Dimension::AngularFrequency),
    ),
    ("g_factor", Kind::Number),
    ("target_vg", Kind::Quantity(Dimension::Velocity)),
    ("bias", Kind::Quantity(Dimension::MagneticField)),
    ("gradient", Kind::Quantity(Dimension::FieldGradient)),
    ("waist", Kind::Quantity(Dimension::Length)),
    ("beam_power", Kind::Quantity(Dimension::Power)),
    ("camera_distance", Kind::Quantity(Dimension::Length)),
    ("steps", Kind::Count),
    ("spectrum_span", Kind::Number),
    ("spectrum_points", Kind::Count),
    ("pulse_sigma", Kind::Quantity(Dimension::Time)),
    (
        "pulse_detuning",
        Kind::Quantity(Dimension::AngularFrequency),
    ),
    ("sweep_rabi_factors", Kind::List),
    ("repeats", Kind::Count),
    ("displacement_noise", Kind::Quantity(Dimension::Length)),
    ("seed", Kind::Seed),
    ("out", Kind::Path),
];

macro_rules! accessors {
    ($get:ident, $get_mut:ident, $ty:ty, [$($field:ident),* $(,)?]) => {
        fn $get(&self, key: &str) -> $ty {
            match key {
                $(stringify!($field) => self.$field,)*
                _ => unreachable!("no field {key}"),
            }
        }

        fn $get_mut(&mut self, key: &str) -> &mut $ty {
            match key {
                $(stringify!($field) => &mut self.$field,)*
                _ => unreachable!("no field {key}"),
            }
        }
    };
}

impl Scenario {
    accessors!(
        number,
        number_mut,
        f64,
        [
            wavelength,
            cell_length,
            rabi_control,
            gamma_e,
            gamma_c,
            one_photon_detuning,
            g_factor,
            target_vg,
            bias,
            gradient,
            waist,
            beam_power,
            camera_distance,
            spectrum_span,
            pulse_sigma,
            pulse_detuning,
            displacement_noise,
        ]
    );
    accessors!(count, count_mut, usize, [steps, spectrum_points, repeats]);

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Scenario::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let Some((_, kind)) = KEYS.iter().find(|(k, _)| *k == key) else {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_owned(),
                });
            };
            if !seen.insert(key.to_owned()) {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_owned(),
                });
            }
            let bad = |reason: &str| ConfigError::Value {
                line,
                key: key.to_owned(),
                reason: reason.to_owned(),
            };
            match kind {
                Kind::Quantity(dim) => {
                    let v = parse_quantity(value, *dim).map_err(|err| ConfigError::Unit {
                        line,
                        key: key.to_owned(),
                        err,
                    })?;
                    *s.number_mut(key) = v;
                }
                Kind::Number => {
                    *s.number_mut(key) = value.parse().map_err(|_| bad("expected a number"))?;
                }
                Kind::Count => {
                    *s.count_mut(key) =
                        value.parse().map_err(|_| bad("expected a whole number"))?;
                }
                Kind::Seed => s.seed = value.parse().map_err(|_| bad("expected a u64"))?,
                Kind::List => {
                    s.sweep_rabi_factors = value
                        .split(',')
                        .map(|v| v.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad("expected comma-separated numbers"))?;
                }
                Kind::Path => s.out = PathBuf::from(value),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|err| ConfigError::Io {
            path: path.to_owned(),
            err,
        })?;
        Self::parse(&text)
    }

    /// Writes every key in SI units.
    pub fn serialize(&self) -> String {
        let mut text = String::new();
        for (key, kind) in KEYS {
            let value = match kind {
                Kind::Quantity(dim) => format_quantity(self.number(key), *dim),
                Kind::Number => format_number(self.number(key)),
                Kind::Count => self.count(key).to_string(),
                Kind::Seed => self.seed.to_string(),
                Kind::List => self
                    .sweep_rabi_factors
                    .iter()
                    .map(|&f| format_number(f))
                    .collect::<Vec<_>>()
                    .join(", "),
                Kind::Path => self.out.display().to_string(),
            };
            writeln!(text, "{key} = {value}").unwrap();
        }
        text
    }

    /// Medium with its coupling calibrated to `target_vg`.
    pub fn medium(&self) -> slowlight_core::Result<MediumParams> {
        let base = MediumParams {
            lambda_s: self.wavelength,
            cell_length: self.cell_length,
            rabi_control: self.rabi_control,
            gamma_e: self.gamma_e,
            gamma_c: self.gamma_c,
            delta_one_photon: self.one_photon_detuning,
            g_factor: self.g_factor,
            ..MediumParams::default()
        };
        calibrate_to_vg(&base, self.target_vg)
    }

    pub fn field_map(&self) -> FieldMap {
        FieldMap {
            b0: self.bias,
            grad_x: self.gradient,
        }
    }

    pub fn beam(&self, medium: &MediumParams) -> slowlight_core::Result<BeamSetup> {
        let mut beam = BeamSetup::new(self.waist, self.beam_power, medium)?;
        beam.camera_distance = self.camera_distance;
        beam.n_steps = self.steps;
        Ok(beam)
    }

    pub fn sweep_config(&self) -> slowlight_core::Result<SweepConfig> {
        let medium = self.medium()?;
        Ok(SweepConfig {
            beam: self.beam(&medium)?,
            medium,
            fmap: self.field_map(),
            sigma_t: self.pulse_sigma,
            repeats: self.repeats,
            displacement_noise: self.displacement_noise,
            seed: self.seed,
        })
    }

    /// Absolute Rabi frequencies of the sweep rows.
    pub fn sweep_rabi(&self) -> Vec<f64> {
        self.sweep_rabi_factors
            .iter()
            .map(|f| f * self.rabi_control)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let s = Scenario::default();
        assert_eq!(Scenario::parse(&s.serialize()).unwrap(), s);
    }

    #[test]
    fn mixed_units_and_comments() {
        let s = Scenario::parse(
            "# cell\nwavelength = 795 nm\nbias = 116 mG  # stripe\n\ngradient = 910 uG/mm\nrabi_control = 1 MHz\n",
        )
        .unwrap();
        assert!((s.bias - 1.16e-5).abs() < 1e-18);
        assert!((s.gradient - 9.1e-5).abs() < 1e-17);
        assert!((s.rabi_control - 2.0 * PI * 1e6).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Scenario::parse("wavelength = 795"),
            Err(ConfigError::Unit { line: 1, .. })
        ));
        assert!(matches!(
            Scenario::parse("colour = blue"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            Scenario::parse("seed = 1\nseed = 2"),
            Err(ConfigError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            Scenario::parse("just words"),
            Err(ConfigError::Syntax { line: 1 })
        ));
        assert!(matches!(
            Scenario::parse("repeats = 2.5"),
            Err(ConfigError::Value { .. })
        ));
    }
}
