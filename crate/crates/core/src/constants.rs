//! Physical constants (CODATA 2018, SI).
//!
//! The vacuum permittivity is derived from μ₀ and c so that μ₀ε₀c² = 1 holds
//! to rounding.

use serde::{Deserialize, Serialize};

/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant (J·s), exact since the 2019 SI redefinition.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge (C), exact.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant (eV·s).
pub const HBAR_EV_S: f64 = HBAR / ELEMENTARY_CHARGE;
/// Vacuum permeability (H/m).
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 =
    1.0 / (VACUUM_PERMEABILITY * SPEED_OF_LIGHT * SPEED_OF_LIGHT);

/// Bundle of the constants that enter the rate formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// m/s
    pub c: f64,
    /// J·s
    pub hbar: f64,
    /// F/m
    pub eps0: f64,
    /// H/m
    pub mu0: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        c: SPEED_OF_LIGHT,
        hbar: HBAR,
        eps0: VACUUM_PERMITTIVITY,
        mu0: VACUUM_PERMEABILITY,
    };

    pub fn hbar_js(&self) -> f64 {
        self.hbar
    }

    pub fn hbar_ev_s(&self) -> f64 {
        self.hbar / ELEMENTARY_CHARGE
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}
