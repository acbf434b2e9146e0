//! Unit conversions between the SI values used internally and the
//! Å / eV / Å³ / Mb values used on input and output.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::constants::{HBAR_EV_S, SPEED_OF_LIGHT};
use crate::error::{IcdError, Result};

pub const ANGSTROM: f64 = 1e-10;
pub const NANOMETER: f64 = 1e-9;
/// One megabarn in m².
pub const MEGABARN: f64 = 1e-22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthUnit {
    Angstrom,
    Nanometer,
    Meter,
}

impl LengthUnit {
    fn in_meters(self) -> f64 {
        match self {
            LengthUnit::Angstrom => ANGSTROM,
            LengthUnit::Nanometer => NANOMETER,
            LengthUnit::Meter => 1.0,
        }
    }
}

impl FromStr for LengthUnit {
    type Err = IcdError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Å" | "A" | "Angstrom" | "angstrom" => Ok(LengthUnit::Angstrom),
            "nm" => Ok(LengthUnit::Nanometer),
            "m" => Ok(LengthUnit::Meter),
            other => Err(IcdError::UnknownUnit(other.to_string())),
        }
    }
}

impl fmt::Display for LengthUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LengthUnit::Angstrom => "Å",
            LengthUnit::Nanometer => "nm",
            LengthUnit::Meter => "m",
        })
    }
}

/// Ways of specifying a transition: photon energy, angular or linear
/// frequency, or vacuum wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralUnit {
    ElectronVolt,
    RadPerSecond,
    Hertz,
    WavelengthAngstrom,
}

impl FromStr for SpectralUnit {
    type Err = IcdError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "eV" => Ok(SpectralUnit::ElectronVolt),
            "rad/s" => Ok(SpectralUnit::RadPerSecond),
            "Hz" => Ok(SpectralUnit::Hertz),
            "wavelength-Å" | "wavelength-A" | "Å" | "A" => Ok(SpectralUnit::WavelengthAngstrom),
            other => Err(IcdError::UnknownUnit(other.to_string())),
        }
    }
}

pub fn convert_length(value: f64, from: LengthUnit, to: LengthUnit) -> f64 {
    value * from.in_meters() / to.in_meters()
}

/// Angular frequency (rad/s) from any spectral unit.
pub fn to_angular_frequency(value: f64, unit: SpectralUnit) -> Result<f64> {
    if !(value.is_finite() && value > 0.0) {
        return Err(IcdError::invalid(
            "spectral value",
            format!("must be positive and finite, got {value}"),
        ));
    }
    Ok(match unit {
        SpectralUnit::ElectronVolt => value / HBAR_EV_S,
        SpectralUnit::RadPerSecond => value,
        SpectralUnit::Hertz => 2.0 * PI * value,
        SpectralUnit::WavelengthAngstrom => 2.0 * PI * SPEED_OF_LIGHT / (value * ANGSTROM),
    })
}

fn from_angular_frequency(omega: f64, unit: SpectralUnit) -> f64 {
    match unit {
        SpectralUnit::ElectronVolt => omega * HBAR_EV_S,
        SpectralUnit::RadPerSecond => omega,
        SpectralUnit::Hertz => omega / (2.0 * PI),
        SpectralUnit::WavelengthAngstrom => 2.0 * PI * SPEED_OF_LIGHT / omega / ANGSTROM,
    }
}

pub fn convert_energy_frequency(value: f64, from: SpectralUnit, to: SpectralUnit) -> Result<f64> {
    if from == to {
        return Ok(value);
    }
    Ok(from_angular_frequency(to_angular_frequency(value, from)?, to))
}

/// Vacuum wavelength (m) of a transition with angular frequency `omega`.
pub fn wavelength_from_omega(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega
}

pub fn omega_from_wavelength(lambda: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / lambda
}

/// Decay width ħΓ in eV for a rate in 1/s.
pub fn width_ev(rate: f64) -> f64 {
    rate * HBAR_EV_S
}

/// Rate in 1/s for a decay width in eV.
pub fn rate_from_width_ev(width: f64) -> f64 {
    width / HBAR_EV_S
}

/// C₆ in eV·Å⁶ → m⁶/s.
pub fn c6_from_ev_a6(c6: f64) -> f64 {
    rate_from_width_ev(c6) * ANGSTROM.powi(6)
}

pub fn c6_to_ev_a6(c6: f64) -> f64 {
    width_ev(c6) / ANGSTROM.powi(6)
}

/// C₂ in eV·Å² → m²/s.
pub fn c2_from_ev_a2(c2: f64) -> f64 {
    rate_from_width_ev(c2) * ANGSTROM.powi(2)
}

pub fn c2_to_ev_a2(c2: f64) -> f64 {
    width_ev(c2) / ANGSTROM.powi(2)
}

/// Polarizability volume Å³ → m³.
pub fn volume_from_a3(alpha: f64) -> f64 {
    alpha * ANGSTROM.powi(3)
}

pub fn volume_to_a3(alpha: f64) -> f64 {
    alpha / ANGSTROM.powi(3)
}

/// Categories of quantities accepted on the command line. Each has a default
/// unit used when the value carries no suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantityKind {
    /// default Å; also `nm`, `m`
    Length,
    /// default Å³; also `nm3`, `m3`
    Volume,
    /// default eV (photon energy); also `rad/s`, `Hz`, or a wavelength with `Å`
    Spectral,
    /// default eV (width ħΓ); also `/s`
    Rate,
    /// default Mb; also `A2`, `m2`
    CrossSection,
    /// default eV·Å⁶; also `m6/s`
    C6,
    /// default eV·Å²; also `m2/s`
    C2,
}

/// Splits `text` into the longest numeric prefix and a unit suffix.
fn split_number(text: &str) -> Result<(f64, &str)> {
    let text = text.trim();
    for end in (1..=text.len()).rev() {
        if !text.is_char_boundary(end) {
            continue;
        }
        if let Ok(v) = text[..end].trim().parse::<f64>() {
            if !v.is_finite() {
                break;
            }
            return Ok((v, text[end..].trim()));
        }
    }
    Err(IcdError::Format(format!("`{text}` is not a number")))
}

/// Parses a value with an optional unit suffix into SI.
pub fn parse_quantity(text: &str, kind: QuantityKind) -> Result<f64> {
    let (v, suffix) = split_number(text)?;
    let unknown = || Err(IcdError::UnknownUnit(suffix.to_string()));
    match kind {
        QuantityKind::Length => match suffix {
            "" => Ok(v * ANGSTROM),
            s => Ok(convert_length(v, s.parse()?, LengthUnit::Meter)),
        },
        QuantityKind::Volume => match suffix {
            "" | "A3" | "Å3" | "Å³" => Ok(v * ANGSTROM.powi(3)),
            "nm3" => Ok(v * NANOMETER.powi(3)),
            "m3" => Ok(v),
            _ => unknown(),
        },
        QuantityKind::Spectral => match suffix {
            "" => to_angular_frequency(v, SpectralUnit::ElectronVolt),
            s => to_angular_frequency(v, s.parse()?),
        },
        QuantityKind::Rate => match suffix {
            "" | "eV" => Ok(rate_from_width_ev(v)),
            "/s" | "1/s" | "s^-1" => Ok(v),
            _ => unknown(),
        },
        QuantityKind::CrossSection => match suffix {
            "" | "Mb" => Ok(v * MEGABARN),
            "A2" | "Å2" | "Å²" => Ok(v * ANGSTROM.powi(2)),
            "m2" => Ok(v),
            _ => unknown(),
        },
        QuantityKind::C6 => match suffix {
            "" | "eV*A6" | "eVA6" => Ok(c6_from_ev_a6(v)),
            "m6/s" => Ok(v),
            _ => unknown(),
        },
        QuantityKind::C2 => match suffix {
            "" | "eV*A2" | "eVA2" => Ok(c2_from_ev_a2(v)),
            "m2/s" => Ok(v),
            _ => unknown(),
        },
    }
}
