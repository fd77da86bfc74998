//! Physical constants, unit conversions and parsing of unit-suffixed
//! quantities such as `"5.5 cm^-1"` or `"100 GW/cm^2"`.
//!
//! Everything inside the crate is SI. Rates and Rabi frequencies are angular
//! (rad/s). Spectroscopic wavenumbers are converted with the factor 2πc.

use std::f64::consts::PI;
use std::fmt;

use crate::error::UnitError;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

const CM: f64 = 1e-2;

/// Converts a spectroscopic wavenumber in cm⁻¹ to an angular rate in s⁻¹.
pub fn wavenumber_to_angular_rate(wavenumber_cm: f64) -> Result<f64, UnitError> {
    if !(wavenumber_cm >= 0.0) {
        return Err(UnitError::Negative(wavenumber_cm));
    }
    Ok(2.0 * PI * SPEED_OF_LIGHT / CM * wavenumber_cm)
}

/// Inverse of [`wavenumber_to_angular_rate`].
pub fn angular_rate_to_wavenumber(rate: f64) -> Result<f64, UnitError> {
    if !(rate >= 0.0) {
        return Err(UnitError::Negative(rate));
    }
    Ok(rate * CM / (2.0 * PI * SPEED_OF_LIGHT))
}

/// Vacuum wavelength (m) of a transition with the given angular frequency.
pub fn angular_rate_to_wavelength(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega
}

/// Ordinary frequency (Hz) of an angular rate.
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Physical dimension a quantity string is parsed against.
///
/// The same suffix can mean different things depending on the dimension:
/// `cm^-1` is a spectroscopic wavenumber for [`Dimension::Rate`] but a plain
/// inverse length for [`Dimension::Attenuation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Dimensionless,
    Length,
    Area,
    Time,
    /// Angular rate or angular frequency, stored in s⁻¹.
    Rate,
    NumberDensity,
    Attenuation,
    Intensity,
    Energy,
    /// Electric field amplitude, stored in V/m.
    Field,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Dimensionless => "dimensionless",
            Dimension::Length => "length",
            Dimension::Area => "area",
            Dimension::Time => "time",
            Dimension::Rate => "rate",
            Dimension::NumberDensity => "number density",
            Dimension::Attenuation => "attenuation",
            Dimension::Intensity => "intensity",
            Dimension::Energy => "energy",
            Dimension::Field => "electric field",
        };
        f.write_str(s)
    }
}

enum Scale {
    Linear(f64),
    Wavenumber,
}

fn unit_scale(dim: Dimension, unit: &str) -> Option<Scale> {
    use Dimension::*;
    use Scale::Linear;
    let s = match (dim, unit) {
        (Dimensionless, "" | "1") => Linear(1.0),

        (Length, "m") => Linear(1.0),
        (Length, "cm") => Linear(1e-2),
        (Length, "mm") => Linear(1e-3),
        (Length, "um" | "μm") => Linear(1e-6),
        (Length, "nm") => Linear(1e-9),

        (Area, "m^2") => Linear(1.0),
        (Area, "cm^2") => Linear(1e-4),
        (Area, "mm^2") => Linear(1e-6),
        (Area, "um^2" | "μm^2") => Linear(1e-12),

        (Time, "s") => Linear(1.0),
        (Time, "ms") => Linear(1e-3),
        (Time, "us" | "μs") => Linear(1e-6),
        (Time, "ns") => Linear(1e-9),
        (Time, "ps") => Linear(1e-12),
        (Time, "fs") => Linear(1e-15),

        (Rate, "s^-1" | "1/s" | "rad/s") => Linear(1.0),
        (Rate, "Hz") => Linear(2.0 * PI),
        (Rate, "kHz") => Linear(2.0 * PI * 1e3),
        (Rate, "MHz") => Linear(2.0 * PI * 1e6),
        (Rate, "GHz") => Linear(2.0 * PI * 1e9),
        (Rate, "THz") => Linear(2.0 * PI * 1e12),
        (Rate, "cm^-1") => Scale::Wavenumber,

        (NumberDensity, "m^-3") => Linear(1.0),
        (NumberDensity, "cm^-3") => Linear(1e6),

        (Attenuation, "m^-1" | "1/m") => Linear(1.0),
        (Attenuation, "cm^-1" | "1/cm") => Linear(1e2),

        (Intensity, "W/m^2") => Linear(1.0),
        (Intensity, "W/cm^2") => Linear(1e4),
        (Intensity, "kW/cm^2") => Linear(1e7),
        (Intensity, "MW/cm^2") => Linear(1e10),
        (Intensity, "GW/cm^2") => Linear(1e13),
        (Intensity, "TW/cm^2") => Linear(1e16),

        (Energy, "J") => Linear(1.0),
        (Energy, "mJ") => Linear(1e-3),
        (Energy, "uJ" | "μJ") => Linear(1e-6),
        (Energy, "nJ") => Linear(1e-9),
        (Energy, "pJ") => Linear(1e-12),
        (Energy, "fJ") => Linear(1e-15),

        (Field, "V/m") => Linear(1.0),
        (Field, "V/cm") => Linear(1e2),
        (Field, "kV/cm") => Linear(1e5),
        (Field, "MV/cm") => Linear(1e8),
        _ => return None,
    };
    Some(s)
}

/// Parses `"<number> <unit>"` into an SI value of the requested dimension.
///
/// Dimensionless quantities may omit the unit. Every other dimension requires
/// an explicit unit suffix.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, UnitError> {
    let trimmed = text.trim();
    let (number, unit) = match trimmed.find(char::is_whitespace) {
        Some(idx) => (&trimmed[..idx], trimmed[idx..].trim()),
        None => (trimmed, ""),
    };
    let value: f64 = number.parse().map_err(|_| UnitError::BadNumber(trimmed.to_string()))?;
    if !value.is_finite() {
        return Err(UnitError::BadNumber(trimmed.to_string()));
    }
    if unit.is_empty() && dim != Dimension::Dimensionless {
        return Err(UnitError::MissingUnit {
            text: trimmed.to_string(),
            dimension: dim,
        });
    }
    match unit_scale(dim, unit) {
        Some(Scale::Linear(f)) => Ok(value * f),
        Some(Scale::Wavenumber) => wavenumber_to_angular_rate(value),
        None => Err(UnitError::UnknownUnit {
            unit: unit.to_string(),
            dimension: dim,
        }),
    }
}

/// Formats an SI value back into the unit requested, for reports.
pub fn format_in(value: f64, dim: Dimension, unit: &str) -> Result<String, UnitError> {
    match unit_scale(dim, unit) {
        Some(Scale::Linear(f)) => Ok(format!("{} {}", value / f, unit)),
        Some(Scale::Wavenumber) => Ok(format!("{} {}", angular_rate_to_wavenumber(value)?, unit)),
        None => Err(UnitError::UnknownUnit {
            unit: unit.to_string(),
            dimension: dim,
        }),
    }
}
