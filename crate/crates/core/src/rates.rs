//! ICD rate engine.
//!
//! [`rate_trace`] evaluates the general trace formula
//! Γ = 2π² γ_D σ_A Tr[G(r_A, r_D, ω_D) · G*(r_D, r_A, ω_D)] for any background
//! tensor, expanding the mediated Green's tensor in powers of α. The closed
//! forms ([`rate_nr_general`], [`rate_nr_collinear`], [`rate_r_collinear`])
//! are the analytic reductions of that formula in the static and far-field
//! limits and are cross-checked against it in the test suites.
//!
//! The collinear static factor is 1 + 2u + 3u² with u = αρ³_AD/(ρ³_DMρ³_MA).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{IcdError, Result};
use crate::geometry::{derive_geometry, GeometryTolerances, Position, TriangleGeometry};
use crate::greens::{born_term, g0, MediatorSpec, TensorKind};

/// Coupling strength above which the first-order Born picture is no longer trusted.
pub const PERTURBATIVE_LIMIT: f64 = 1.0;
/// Coupling strength below which results are considered quantitatively reliable.
pub const QUANTITATIVE_LIMIT: f64 = 0.5;

const COLLINEAR_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DonorSpec {
    /// Free-space decay rate γ_D (1/s).
    pub gamma_d: f64,
    /// Transition angular frequency ω_D (rad/s).
    pub omega_d: f64,
}

impl DonorSpec {
    pub fn new(gamma_d: f64, omega_d: f64) -> Result<Self> {
        if !(gamma_d.is_finite() && gamma_d > 0.0) {
            return Err(IcdError::invalid("gamma_d", format!("must be positive, got {gamma_d:e}")));
        }
        if !(omega_d.is_finite() && omega_d > 0.0) {
            return Err(IcdError::invalid("omega_d", format!("must be positive, got {omega_d:e}")));
        }
        Ok(DonorSpec { gamma_d, omega_d })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceptorSpec {
    /// Photoionization cross section σ_A(ħω_D) in m².
    pub sigma_a: f64,
}

impl AcceptorSpec {
    pub fn new(sigma_a: f64) -> Result<Self> {
        if !(sigma_a.is_finite() && sigma_a >= 0.0) {
            return Err(IcdError::invalid("sigma_a", format!("must be >= 0, got {sigma_a:e}")));
        }
        Ok(AcceptorSpec { sigma_a })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientSource {
    ComputedFromAtoms,
    Fitted,
    UserSupplied,
}

/// Two-body prefactors: Γ = C₆/ρ⁶ in the static regime and Γ = C₂/ρ² in the
/// far field. SI units (m⁶/s and m²/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateCoefficients {
    pub c6: f64,
    /// Unknown when C₆ was fitted from static-regime data without a frequency.
    pub c2: Option<f64>,
    pub source: CoefficientSource,
}

impl RateCoefficients {
    pub fn c6_ev_a6(&self) -> f64 {
        crate::units::c6_to_ev_a6(self.c6)
    }

    pub fn c2_ev_a2(&self) -> Option<f64> {
        self.c2.map(crate::units::c2_to_ev_a2)
    }
}

/// C₆ = γ_D σ_A · 3c⁴/(4ω_D⁴).
pub fn compute_c6(donor: &DonorSpec, acceptor: &AcceptorSpec) -> f64 {
    donor.gamma_d * acceptor.sigma_a * 3.0 * SPEED_OF_LIGHT.powi(4) / (4.0 * donor.omega_d.powi(4))
}

/// C₂ = γ_D σ_A / 4.
pub fn compute_c2(donor: &DonorSpec, acceptor: &AcceptorSpec) -> f64 {
    donor.gamma_d * acceptor.sigma_a / 4.0
}

pub fn compute_coefficients(donor: &DonorSpec, acceptor: &AcceptorSpec) -> RateCoefficients {
    RateCoefficients {
        c6: compute_c6(donor, acceptor),
        c2: Some(compute_c2(donor, acceptor)),
        source: CoefficientSource::ComputedFromAtoms,
    }
}

/// One decay channel as seen by the trace formula: only the product γ_D σ_A
/// and the transition frequency enter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayChannel {
    /// γ_D σ_A in m²/s.
    pub gamma_sigma: f64,
    pub omega_d: f64,
}

impl DecayChannel {
    pub fn from_atoms(donor: &DonorSpec, acceptor: &AcceptorSpec) -> Self {
        DecayChannel {
            gamma_sigma: donor.gamma_d * acceptor.sigma_a,
            omega_d: donor.omega_d,
        }
    }

    /// Channel reproducing a given C₆ (m⁶/s) at transition frequency `omega_d`.
    pub fn from_c6(c6: f64, omega_d: f64) -> Result<Self> {
        check_nonneg("c6", c6)?;
        check_positive("omega_d", omega_d)?;
        Ok(DecayChannel {
            gamma_sigma: 4.0 * c6 * omega_d.powi(4) / (3.0 * SPEED_OF_LIGHT.powi(4)),
            omega_d,
        })
    }

    pub fn from_c2(c2: f64, omega_d: f64) -> Result<Self> {
        check_nonneg("c2", c2)?;
        check_positive("omega_d", omega_d)?;
        Ok(DecayChannel {
            gamma_sigma: 4.0 * c2,
            omega_d,
        })
    }

    /// Both coefficients fix the frequency through C₆/C₂ = 3c⁴/ω⁴.
    pub fn from_c6_c2(c6: f64, c2: f64) -> Result<Self> {
        check_positive("c6", c6)?;
        check_positive("c2", c2)?;
        let omega = (3.0 * SPEED_OF_LIGHT.powi(4) * c2 / c6).powf(0.25);
        Self::from_c2(c2, omega)
    }

    pub fn wavenumber(&self) -> f64 {
        self.omega_d / SPEED_OF_LIGHT
    }

    pub fn coefficients(&self, source: CoefficientSource) -> RateCoefficients {
        RateCoefficients {
            c6: self.gamma_sigma * 3.0 * SPEED_OF_LIGHT.powi(4) / (4.0 * self.omega_d.powi(4)),
            c2: Some(self.gamma_sigma / 4.0),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub channel: DecayChannel,
    pub donor: Position,
    pub acceptor: Position,
    pub mediator: Option<MediatorSpec>,
}

impl SystemSpec {
    pub fn two_body(&self) -> SystemSpec {
        SystemSpec { mediator: None, ..*self }
    }

    /// Smallest and largest pairwise separation among the atoms present.
    pub fn separation_range(&self) -> (f64, f64) {
        let mut d = vec![self.donor.distance(self.acceptor)];
        if let Some(m) = &self.mediator {
            d.push(self.donor.distance(m.position));
            d.push(self.acceptor.distance(m.position));
        }
        let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = d.iter().cloned().fold(0.0, f64::max);
        (min, max)
    }
}

/// Picks the cheapest background tensor whose validity bound holds:
/// static when kρ_max < 0.1, far field when kρ_min > 10, full otherwise.
pub fn select_kind(system: &SystemSpec) -> TensorKind {
    let k = system.channel.wavenumber();
    let (min, max) = system.separation_range();
    if k * max < 0.1 {
        TensorKind::NonRetarded
    } else if k * min > 10.0 {
        TensorKind::FarField
    } else {
        TensorKind::Full
    }
}

/// A rate split by powers of the mediator polarizability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBreakdown {
    pub total: f64,
    /// α⁰: donor and acceptor coupled directly.
    pub direct: f64,
    /// α¹: interference between the direct and the scattered path.
    pub cross: f64,
    /// α²: photon scattered off the mediator on both legs.
    pub scattered: f64,
    pub u_nr: f64,
    pub u_r: Option<f64>,
    /// Governing coupling strength below [`PERTURBATIVE_LIMIT`].
    pub perturbative_ok: bool,
    /// Governing coupling strength below [`QUANTITATIVE_LIMIT`].
    pub quantitative_ok: bool,
}

impl RateBreakdown {
    fn assemble(direct: f64, cross: f64, scattered: f64, u_nr: f64, u_r: Option<f64>, governing: f64) -> Self {
        RateBreakdown {
            total: (direct + cross + scattered).max(0.0),
            direct,
            cross,
            scattered,
            u_nr,
            u_r,
            perturbative_ok: governing < PERTURBATIVE_LIMIT,
            quantitative_ok: governing < QUANTITATIVE_LIMIT,
        }
    }

    /// Total rate relative to the two-body (α = 0) rate.
    pub fn normalized(&self) -> f64 {
        self.total / self.direct
    }

    pub fn scale(&self, s: f64) -> RateBreakdown {
        RateBreakdown {
            total: self.total * s,
            direct: self.direct * s,
            cross: self.cross * s,
            scattered: self.scattered * s,
            ..*self
        }
    }
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(IcdError::invalid(name, format!("must be finite and >= 0, got {v:e}")))
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(IcdError::invalid(name, format!("must be finite and > 0, got {v:e}")))
    }
}

/// u_NR = α ρ³_AD / (ρ³_DM ρ³_MA)
pub fn u_nonretarded(rho_ad: f64, rho_dm: f64, rho_ma: f64, alpha: f64) -> f64 {
    alpha * rho_ad.powi(3) / (rho_dm.powi(3) * rho_ma.powi(3))
}

/// u_R = α k² ρ_AD / (ρ_AM ρ_DM)
pub fn u_retarded(rho_ad: f64, rho_am: f64, rho_dm: f64, alpha: f64, omega_d: f64) -> f64 {
    let k = omega_d / SPEED_OF_LIGHT;
    alpha * k * k * rho_ad / (rho_am * rho_dm)
}

/// Trace-formula rate for a single decay channel.
pub fn rate_trace(system: &SystemSpec, kind: TensorKind, include_mediator: bool) -> Result<RateBreakdown> {
    check_nonneg("gamma_sigma", system.channel.gamma_sigma)?;
    let omega = system.channel.omega_d;
    let (r_d, r_a) = (system.donor, system.acceptor);
    let prefactor = 2.0 * PI * PI * system.channel.gamma_sigma;

    // G(r_A, r_D) and G(r_D, r_A), each split into direct and scattered parts.
    let fwd = g0(kind, r_a, r_d, omega)?;
    let bwd = g0(kind, r_d, r_a, omega)?;
    // Tr[A · B*] = Σ A_ij B_ji*
    let tr = |a: &crate::tensor::ComplexTensor3, b: &crate::tensor::ComplexTensor3| a.inner(&b.transpose()).re;
    let direct = prefactor * tr(&fwd, &bwd);

    let mediator = match (include_mediator, system.mediator) {
        (true, Some(m)) => m,
        _ => {
            if r_d.distance(r_a) < GeometryTolerances::default().dist_eps {
                return Err(IcdError::DegenerateGeometry("donor and acceptor coincide".into()));
            }
            return Ok(RateBreakdown::assemble(direct, 0.0, 0.0, 0.0, None, 0.0));
        }
    };
    let geom = derive_geometry(r_d, r_a, mediator.position)?;
    let s_fwd = born_term(r_a, r_d, omega, &mediator, kind)?;
    let s_bwd = born_term(r_d, r_a, omega, &mediator, kind)?;
    let cross = prefactor * (tr(&fwd, &s_bwd) + tr(&s_fwd, &bwd));
    let scattered = prefactor * tr(&s_fwd, &s_bwd);

    let u_nr = u_nonretarded(geom.rho_ad, geom.rho_dm, geom.rho_ma, mediator.alpha);
    let u_r = u_retarded(geom.rho_ad, geom.rho_ma, geom.rho_dm, mediator.alpha, omega);
    let governing = match kind {
        TensorKind::NonRetarded => u_nr,
        TensorKind::FarField => u_r,
        TensorKind::Full => u_nr.max(u_r),
    };
    Ok(RateBreakdown::assemble(direct, cross, scattered, u_nr, Some(u_r), governing))
}

/// Static-regime closed form for an arbitrary triangle.
pub fn rate_nr_general(geom: &TriangleGeometry, c6: f64, alpha: f64) -> Result<RateBreakdown> {
    check_nonneg("c6", c6)?;
    check_nonneg("alpha", alpha)?;
    let eps = GeometryTolerances::default().dist_eps;
    if geom.rho_ad < eps || geom.rho_dm < eps || geom.rho_ma < eps {
        return Err(IcdError::DegenerateGeometry("zero side length".into()));
    }
    let (ad3, dm3, ma3) = (geom.rho_ad.powi(3), geom.rho_dm.powi(3), geom.rho_ma.powi(3));
    let cos_ad = geom.theta_ad.cos();
    let triple = 1.0 + 3.0 * geom.theta_dm.cos() * geom.theta_ma.cos() * cos_ad;

    let direct = c6 / (ad3 * ad3);
    let scattered = c6 * 1.5 * alpha * alpha * (1.0 + cos_ad * cos_ad) / (dm3 * dm3 * ma3 * ma3);
    let cross = -c6 * alpha * triple / (ad3 * dm3 * ma3);
    let u_nr = u_nonretarded(geom.rho_ad, geom.rho_dm, geom.rho_ma, alpha);
    Ok(RateBreakdown::assemble(direct, cross, scattered, u_nr, None, u_nr))
}

fn check_collinear(rho_ad: f64, rho_a: f64, rho_b: f64, between: bool) -> Result<()> {
    for (name, v) in [("rho_ad", rho_ad), ("rho_dm", rho_a), ("rho_ma", rho_b)] {
        check_positive(name, v)?;
    }
    let mismatch = if between {
        (rho_a + rho_b - rho_ad).abs()
    } else {
        ((rho_a - rho_b).abs() - rho_ad).abs()
    };
    if mismatch > COLLINEAR_REL_TOL * rho_ad {
        let shape = if between { "between" } else { "outside" };
        return Err(IcdError::NotCollinear(format!(
            "distances ({rho_ad:e}, {rho_a:e}, {rho_b:e}) do not describe a mediator {shape} the donor-acceptor segment"
        )));
    }
    Ok(())
}

/// Static-regime rate with all three atoms on a line.
pub fn rate_nr_collinear(
    rho_ad: f64,
    rho_dm: f64,
    rho_ma: f64,
    c6: f64,
    alpha: f64,
    mediator_between: bool,
) -> Result<RateBreakdown> {
    check_collinear(rho_ad, rho_dm, rho_ma, mediator_between)?;
    check_nonneg("c6", c6)?;
    check_nonneg("alpha", alpha)?;
    if mediator_between {
        let u = u_nonretarded(rho_ad, rho_dm, rho_ma, alpha);
        let direct = c6 / rho_ad.powi(6);
        return Ok(RateBreakdown::assemble(direct, 2.0 * u * direct, 3.0 * u * u * direct, u, None, u));
    }
    // The atom nearer to the mediator sees the other two in opposite directions.
    let (theta_dm, theta_ma) = if rho_dm > rho_ma { (PI, 0.0) } else { (0.0, PI) };
    let geom = TriangleGeometry {
        rho_ad,
        rho_dm,
        rho_ma,
        theta_ad: 0.0,
        theta_dm,
        theta_ma,
        collinear: true,
        mediator_between: false,
    };
    rate_nr_general(&geom, c6, alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Placement {
    /// θ_AD = π
    Between,
    /// θ_AD = 0, on either extension of the donor–acceptor axis.
    Outside,
}

/// Far-field rate with all three atoms on a line.
///
/// Outside the segment the mediated path is longer than the direct one by
/// twice the distance from the mediator to the nearer atom, which sets the
/// phase of the interference term.
pub fn rate_r_collinear(
    rho_ad: f64,
    rho_am: f64,
    rho_dm: f64,
    c2: f64,
    alpha: f64,
    omega_d: f64,
    placement: Placement,
) -> Result<RateBreakdown> {
    check_collinear(rho_ad, rho_dm, rho_am, placement == Placement::Between)?;
    check_nonneg("c2", c2)?;
    check_nonneg("alpha", alpha)?;
    check_positive("omega_d", omega_d)?;
    let u = u_retarded(rho_ad, rho_am, rho_dm, alpha, omega_d);
    let interference = match placement {
        Placement::Between => 1.0,
        Placement::Outside => (2.0 * omega_d * rho_am.min(rho_dm) / SPEED_OF_LIGHT).cos(),
    };
    let direct = c2 / (rho_ad * rho_ad);
    let u_nr = u_nonretarded(rho_ad, rho_dm, rho_am, alpha);
    Ok(RateBreakdown::assemble(
        direct,
        2.0 * u * interference * direct,
        u * u * direct,
        u_nr,
        Some(u),
        u,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{c6_from_ev_a6, omega_from_wavelength, volume_from_a3};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    fn ne_channel() -> DecayChannel {
        DecayChannel::from_c6(c6_from_ev_a6(3.6), omega_from_wavelength(480e-10)).unwrap()
    }

    fn z(a: f64) -> Position {
        Position::from_angstrom(0.0, 0.0, a)
    }

    #[test]
    fn coefficient_scaling() {
        let d = DonorSpec::new(1e12, 4e16).unwrap();
        let a = AcceptorSpec::new(2e-22).unwrap();
        let base = compute_coefficients(&d, &a);
        let d2 = DonorSpec::new(2e12, 4e16).unwrap();
        assert!(close(compute_c6(&d2, &a), 2.0 * base.c6, 1e-15));
        assert!(close(compute_c2(&d2, &a), 2.0 * base.c2.unwrap(), 1e-15));
        let half = DonorSpec::new(1e12, 2e16).unwrap();
        assert!(close(compute_c6(&half, &a), 16.0 * base.c6, 1e-14));
        assert_eq!(Some(compute_c2(&half, &a)), base.c2);
        let dark = AcceptorSpec::new(0.0).unwrap();
        assert_eq!(compute_c6(&d, &dark), 0.0);
        assert_eq!(compute_c2(&d, &dark), 0.0);
        assert!(DonorSpec::new(0.0, 1.0).is_err());
        assert!(AcceptorSpec::new(-1.0).is_err());
    }

    #[test]
    fn channel_round_trips_coefficients() {
        let ch = ne_channel();
        let coeffs = ch.coefficients(CoefficientSource::UserSupplied);
        assert!(close(coeffs.c6_ev_a6(), 3.6, 1e-12));
        let back = DecayChannel::from_c6_c2(coeffs.c6, coeffs.c2.unwrap()).unwrap();
        assert!(close(back.omega_d, ch.omega_d, 1e-12));
        assert!(close(back.gamma_sigma, ch.gamma_sigma, 1e-12));
    }

    #[test]
    fn two_body_trace_is_c6_over_rho6() {
        let ch = ne_channel();
        let sys = SystemSpec { channel: ch, donor: z(0.0), acceptor: Position::from_angstrom(3.0, -4.0, 6.0), mediator: None };
        let r = rate_trace(&sys, TensorKind::NonRetarded, false).unwrap();
        let rho = sys.donor.distance(sys.acceptor);
        let c6 = ch.coefficients(CoefficientSource::UserSupplied).c6;
        assert!(close(r.total, c6 / rho.powi(6), 1e-12));
        assert_eq!(r.cross, 0.0);
        assert_eq!(r.scattered, 0.0);

        let r = rate_trace(&sys, TensorKind::FarField, false).unwrap();
        assert!(close(r.total, ch.gamma_sigma / 4.0 / (rho * rho), 1e-12));
    }

    #[test]
    fn midpoint_trace_factor() {
        // ρ_AD = 10 Å, α = 0.205 Å³: u = 64·0.205/1000
        let m = MediatorSpec::new(z(5.0), volume_from_a3(0.205)).unwrap();
        let sys = SystemSpec { channel: ne_channel(), donor: z(0.0), acceptor: z(10.0), mediator: Some(m) };
        let r = rate_trace(&sys, TensorKind::NonRetarded, true).unwrap();
        let u = 0.01312;
        assert!(close(r.u_nr, u, 1e-12));
        assert!(close(r.normalized(), 1.0 + 2.0 * u + 3.0 * u * u, 1e-12));
        assert!((r.normalized() - 1.02676).abs() < 1e-5);
        assert!(r.perturbative_ok && r.quantitative_ok);
    }

    #[test]
    fn equilateral_cross_term() {
        let rho = 5e-10;
        let g = TriangleGeometry {
            rho_ad: rho,
            rho_dm: rho,
            rho_ma: rho,
            theta_ad: PI / 3.0,
            theta_dm: PI / 3.0,
            theta_ma: PI / 3.0,
            collinear: false,
            mediator_between: false,
        };
        let alpha = 1e-31;
        let r = rate_nr_general(&g, 2.0, alpha).unwrap();
        assert!(close(r.cross, -1.375 * alpha * 2.0 / rho.powi(9), 1e-12));
        let bare = rate_nr_general(&g, 2.0, 0.0).unwrap();
        assert!(close(bare.total, 2.0 / rho.powi(6), 1e-15));
    }

    #[test]
    fn collinear_midpoint_coefficients() {
        let rho = 8.0;
        let alpha = 0.205;
        let r = rate_nr_collinear(rho, rho / 2.0, rho / 2.0, 3.6, alpha, true).unwrap();
        assert!(close(r.direct, 3.6 / rho.powi(6), 1e-15));
        assert!(close(r.cross, 3.6 * 128.0 * alpha / rho.powi(9), 1e-14));
        assert!(close(r.scattered, 3.6 * 12288.0 * alpha * alpha / rho.powi(12), 1e-14));
        assert!((r.normalized() - 1.0532).abs() < 1e-3);
    }

    #[test]
    fn collinear_rejects_bent_input() {
        assert!(matches!(rate_nr_collinear(10.0, 4.0, 5.0, 1.0, 0.1, true), Err(IcdError::NotCollinear(_))));
        assert!(rate_nr_collinear(10.0, 14.0, 4.0, 1.0, 0.1, false).is_ok());
        assert!(rate_r_collinear(3.0, 1.0, 1.0, 1.0, 0.1, 1e16, Placement::Outside).is_err());
    }

    #[test]
    fn outside_static_matches_general() {
        let g = derive_geometry(z(0.0), z(6.0), z(9.0)).unwrap();
        let closed = rate_nr_collinear(g.rho_ad, g.rho_dm, g.rho_ma, 1.0, 1e-30, false).unwrap();
        let general = rate_nr_general(&g, 1.0, 1e-30).unwrap();
        assert!(close(closed.total, general.total, 1e-12));
    }

    #[test]
    fn retarded_spot_values() {
        let lambda = 1.0e-7;
        let omega = omega_from_wavelength(lambda);
        let alpha = (lambda / 4.0).powi(3);
        let r = rate_r_collinear(3.0 * lambda, lambda, 4.0 * lambda, 1.0, alpha, omega, Placement::Outside).unwrap();
        let u = 12.0 * PI * PI / 256.0;
        assert!(close(r.u_r.unwrap(), u, 1e-12));
        assert!((r.normalized() - 2.139).abs() < 1e-3);
        let r = rate_r_collinear(3.0 * lambda, 1.25 * lambda, 4.25 * lambda, 1.0, alpha, omega, Placement::Outside).unwrap();
        assert!((r.u_r.unwrap() - 0.3483).abs() < 1e-4);
        assert!((r.normalized() - 0.4247).abs() < 1e-3);
        let r = rate_r_collinear(3.0 * lambda, lambda, 2.0 * lambda, 1.0, alpha, omega, Placement::Between).unwrap();
        assert!(close(r.normalized(), (1.0 + r.u_r.unwrap()).powi(2), 1e-14));
    }

    #[test]
    fn auto_kind_selection() {
        let ch = ne_channel();
        let near = SystemSpec { channel: ch, donor: z(0.0), acceptor: z(5.0), mediator: None };
        assert_eq!(select_kind(&near), TensorKind::NonRetarded);
        let far = SystemSpec { acceptor: z(1e5), ..near };
        assert_eq!(select_kind(&far), TensorKind::FarField);
        let mid = SystemSpec { acceptor: z(100.0), ..near };
        assert_eq!(select_kind(&mid), TensorKind::Full);
    }

    #[test]
    fn degenerate_systems_fail() {
        let m = MediatorSpec::new(z(10.0), 1e-31).unwrap();
        let sys = SystemSpec { channel: ne_channel(), donor: z(0.0), acceptor: z(10.0), mediator: Some(m) };
        assert!(rate_trace(&sys, TensorKind::Full, true).is_err());
        assert!(rate_trace(&sys, TensorKind::Full, false).is_ok());
    }
}
