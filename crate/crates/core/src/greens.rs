//! Free-space dyadic Green's tensors and their first-order Born correction
//! for a single point-polarizable mediator.
//!
//! With k = ω/c, ρ = |r − r′| and e = (r − r′)/ρ the homogeneous-space tensor is
//!
//! ```text
//! G(r, r′, ω) = e^{ikρ}/(4πρ) · [ (1 + i/kρ − 1/(kρ)²) I + (−1 − 3i/kρ + 3/(kρ)²) e⊗e ]
//! ```
//!
//! Its static limit is −(I − 3 e⊗e)/(4πk²ρ³) and its far-field limit
//! e^{ikρ}(I − e⊗e)/(4πρ). The mediator is described by its polarizability
//! volume α (m³); the single-scatterer term is
//! 4π α k² G⁽⁰⁾(r, r_M) · G⁽⁰⁾(r_M, r′).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{IcdError, Result};
use crate::geometry::{GeometryTolerances, Position};
use crate::tensor::ComplexTensor3;

/// Which background tensor to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensorKind {
    Full,
    NonRetarded,
    FarField,
}

impl TensorKind {
    pub const ALL: [TensorKind; 3] = [TensorKind::Full, TensorKind::NonRetarded, TensorKind::FarField];

    pub fn as_str(self) -> &'static str {
        match self {
            TensorKind::Full => "full",
            TensorKind::NonRetarded => "nonretarded",
            TensorKind::FarField => "farfield",
        }
    }
}

impl fmt::Display for TensorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for TensorKind {
    type Err = IcdError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(TensorKind::Full),
            "nonretarded" | "nr" => Ok(TensorKind::NonRetarded),
            "farfield" | "retarded" | "ff" => Ok(TensorKind::FarField),
            other => Err(IcdError::InvalidRequest(format!("unknown tensor kind `{other}`"))),
        }
    }
}

/// Isotropic, real, frequency-independent point scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediatorSpec {
    pub position: Position,
    /// Polarizability volume α/(4πε₀) in m³.
    pub alpha: f64,
}

impl MediatorSpec {
    pub fn new(position: Position, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(IcdError::invalid("alpha", format!("polarizability volume must be finite and >= 0, got {alpha:e}")));
        }
        if !position.is_finite() {
            return Err(IcdError::invalid("mediator position", "not finite"));
        }
        Ok(MediatorSpec { position, alpha })
    }
}

fn separation(r: Position, r_prime: Position, omega: f64) -> Result<(f64, Position)> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(IcdError::invalid("omega", format!("must be positive, got {omega:e}")));
    }
    let d = r - r_prime;
    let rho = d.norm();
    if !(rho >= GeometryTolerances::default().dist_eps) {
        return Err(IcdError::Singular { separation: rho });
    }
    Ok((rho, d * (1.0 / rho)))
}

pub fn g0_full(r: Position, r_prime: Position, omega: f64) -> Result<ComplexTensor3> {
    let (rho, e) = separation(r, r_prime, omega)?;
    let x = omega / SPEED_OF_LIGHT * rho;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let a = Complex64::new(1.0 - inv2, inv);
    let b = Complex64::new(-1.0 + 3.0 * inv2, -3.0 * inv);
    let pre = Complex64::from_polar(1.0 / (4.0 * PI * rho), x);
    Ok(ComplexTensor3::isotropic_plus_dyad(a * pre, b * pre, e))
}

pub fn g0_nonretarded(r: Position, r_prime: Position, omega: f64) -> Result<ComplexTensor3> {
    let (rho, e) = separation(r, r_prime, omega)?;
    let k = omega / SPEED_OF_LIGHT;
    let pre = -1.0 / (4.0 * PI * k * k * rho.powi(3));
    Ok(ComplexTensor3::isotropic_plus_dyad(
        Complex64::new(pre, 0.0),
        Complex64::new(-3.0 * pre, 0.0),
        e,
    ))
}

pub fn g0_farfield(r: Position, r_prime: Position, omega: f64) -> Result<ComplexTensor3> {
    let (rho, e) = separation(r, r_prime, omega)?;
    let pre = Complex64::from_polar(1.0 / (4.0 * PI * rho), omega / SPEED_OF_LIGHT * rho);
    Ok(ComplexTensor3::isotropic_plus_dyad(pre, -pre, e))
}

pub fn g0(kind: TensorKind, r: Position, r_prime: Position, omega: f64) -> Result<ComplexTensor3> {
    match kind {
        TensorKind::Full => g0_full(r, r_prime, omega),
        TensorKind::NonRetarded => g0_nonretarded(r, r_prime, omega),
        TensorKind::FarField => g0_farfield(r, r_prime, omega),
    }
}

/// The single-scattering term 4π α k² G⁽⁰⁾(r, r_M) · G⁽⁰⁾(r_M, r′).
pub fn born_term(
    r: Position,
    r_prime: Position,
    omega: f64,
    mediator: &MediatorSpec,
    kind: TensorKind,
) -> Result<ComplexTensor3> {
    let k = omega / SPEED_OF_LIGHT;
    let out = g0(kind, r, mediator.position, omega)?;
    let inn = g0(kind, mediator.position, r_prime, omega)?;
    Ok((out * inn).scale_real(4.0 * PI * mediator.alpha * k * k))
}

pub fn g1_with_mediator(
    r: Position,
    r_prime: Position,
    omega: f64,
    mediator: &MediatorSpec,
    kind: TensorKind,
) -> Result<ComplexTensor3> {
    if !(mediator.alpha.is_finite() && mediator.alpha >= 0.0) {
        return Err(IcdError::invalid("alpha", "polarizability volume must be finite and >= 0"));
    }
    let direct = g0(kind, r, r_prime, omega)?;
    Ok(direct + born_term(r, r_prime, omega, mediator, kind)?)
}
