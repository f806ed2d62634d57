//! Quantities with mandatory unit suffixes.
//!
//! Every dimensioned value in a scenario file is written as `<number> <unit>`. Parsing
//! converts to SI (angular frequencies to rad/s); serialization always writes the SI unit
//! with a shortest round-trip mantissa so that a parse of the output reproduces the value
//! bit for bit.

use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    MagneticField,
    FieldGradient,
    /// Accepts cycle frequencies (Hz, kHz, MHz) and converts them to rad/s.
    AngularFrequency,
    Time,
    Velocity,
    Power,
}

impl Dimension {
    /// Unit written by [`format_quantity`].
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::MagneticField => "T",
            Dimension::FieldGradient => "T/m",
            Dimension::AngularFrequency => "rad/s",
            Dimension::Time => "s",
            Dimension::Velocity => "m/s",
            Dimension::Power => "W",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Length => "length",
            Dimension::MagneticField => "magnetic field",
            Dimension::FieldGradient => "field gradient",
            Dimension::AngularFrequency => "frequency",
            Dimension::Time => "time",
            Dimension::Velocity => "velocity",
            Dimension::Power => "power",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UnitError {
    #[error("missing unit in {0:?}")]
    MissingUnit(String),
    #[error("bad number {0:?}")]
    BadNumber(String),
    #[error("unit {unit:?} is not a {dim}")]
    WrongUnit { unit: String, dim: Dimension },
}

fn length_scale(unit: &str) -> Option<f64> {
    Some(match unit {
        "m" => 1.0,
        "cm" => 1e-2,
        "mm" => 1e-3,
        "um" | "µm" => 1e-6,
        "nm" => 1e-9,
        _ => return None,
    })
}

fn field_scale(unit: &str) -> Option<f64> {
    Some(match unit {
        "T" => 1.0,
        "mT" => 1e-3,
        "uT" | "µT" => 1e-6,
        "nT" => 1e-9,
        "G" => 1e-4,
        "mG" => 1e-7,
        "uG" | "µG" => 1e-10,
        _ => return None,
    })
}

fn time_scale(unit: &str) -> Option<f64> {
    Some(match unit {
        "s" => 1.0,
        "ms" => 1e-3,
        "us" | "µs" => 1e-6,
        "ns" => 1e-9,
        _ => return None,
    })
}

fn scale(unit: &str, dim: Dimension) -> Option<f64> {
    match dim {
        Dimension::Length => length_scale(unit),
        Dimension::MagneticField => field_scale(unit),
        Dimension::Time => time_scale(unit),
        Dimension::FieldGradient => {
            let (b, l) = unit.split_once('/')?;
            Some(field_scale(b)? / length_scale(l)?)
        }
        Dimension::Velocity => {
            let (l, t) = unit.split_once('/')?;
            Some(length_scale(l)? / time_scale(t)?)
        }
        Dimension::AngularFrequency => Some(match unit {
            "rad/s" => 1.0,
            "Hz" => 2.0 * PI,
            "kHz" => 2.0 * PI * 1e3,
            "MHz" => 2.0 * PI * 1e6,
            "GHz" => 2.0 * PI * 1e9,
            _ => return None,
        }),
        Dimension::Power => Some(match unit {
            "W" => 1.0,
            "mW" => 1e-3,
            "uW" | "µW" => 1e-6,
            _ => return None,
        }),
    }
}

/// Parses `"<number> <unit>"` into SI.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, UnitError> {
    let text = text.trim();
    let (number, unit) = text
        .split_once(char::is_whitespace)
        .ok_or_else(|| UnitError::MissingUnit(text.to_owned()))?;
    let value: f64 = number
        .parse()
        .map_err(|_| UnitError::BadNumber(number.to_owned()))?;
    let unit = unit.trim();
    let factor = scale(unit, dim).ok_or_else(|| UnitError::WrongUnit {
        unit: unit.to_owned(),
        dim,
    })?;
    // skip the multiply for SI input so serialized files round-trip exactly
    Ok(if factor == 1.0 { value } else { value * factor })
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_number(value: f64) -> String {
    format!("{value:e}")
}

pub fn format_quantity(value: f64, dim: Dimension) -> String {
    format!("{} {}", format_number(value), dim.si_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spec_style_values() {
        assert_relative_eq!(
            parse_quantity("910 uG/mm", Dimension::FieldGradient).unwrap(),
            9.1e-5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            parse_quantity("116 mG", Dimension::MagneticField).unwrap(),
            1.16e-5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            parse_quantity("795 nm", Dimension::Length).unwrap(),
            795e-9,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            parse_quantity("1 MHz", Dimension::AngularFrequency).unwrap(),
            2.0 * PI * 1e6
        );
        assert_eq!(
            parse_quantity("290 m/s", Dimension::Velocity).unwrap(),
            290.0
        );
    }

    #[test]
    fn units_are_mandatory() {
        assert!(matches!(
            parse_quantity("795", Dimension::Length),
            Err(UnitError::MissingUnit(_))
        ));
        assert!(matches!(
            parse_quantity("795 mG", Dimension::Length),
            Err(UnitError::WrongUnit { .. })
        ));
        assert!(matches!(
            parse_quantity("x nm", Dimension::Length),
            Err(UnitError::BadNumber(_))
        ));
    }

    #[test]
    fn si_round_trip() {
        for v in [9.1e-6, 1.0 / 3.0, 6.283185307179586e6, 0.0, -4.2e-300] {
            let text = format_quantity(v, Dimension::FieldGradient);
            assert_eq!(parse_quantity(&text, Dimension::FieldGradient).unwrap(), v);
        }
    }
}
