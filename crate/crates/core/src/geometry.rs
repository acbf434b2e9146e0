//! Atom positions and the donor/acceptor/mediator triangle.
//!
//! Side lengths are named after the two atoms they join (ρ_AD, ρ_DM, ρ_MA)
//! and each interior angle after the side it faces: θ_AD sits at the
//! mediator, θ_DM at the acceptor and θ_MA at the donor. A mediator on the
//! segment between donor and acceptor therefore has θ_AD = π and
//! θ_DM = θ_MA = 0.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{IcdError, Result};
use crate::units::ANGSTROM;

/// Cartesian position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Position { x, y, z }
    }

    pub fn from_angstrom(x: f64, y: f64, z: f64) -> Self {
        Position::new(x * ANGSTROM, y * ANGSTROM, z * ANGSTROM)
    }

    pub fn to_angstrom(self) -> [f64; 3] {
        [self.x / ANGSTROM, self.y / ANGSTROM, self.z / ANGSTROM]
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Position::new(v[0], v[1], v[2])
    }

    pub fn dot(self, other: Position) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Position) -> Position {
        Position::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Position) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Position {
    type Output = Position;
    fn add(self, o: Position) -> Position {
        Position::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Position {
    type Output = Position;
    fn sub(self, o: Position) -> Position {
        Position::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Position {
    type Output = Position;
    fn neg(self) -> Position {
        Position::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Position {
    type Output = Position;
    fn mul(self, s: f64) -> Position {
        Position::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Tolerances for degeneracy handling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryTolerances {
    /// An angle within this many radians of 0 or π is treated as collinear.
    pub angle_tol: f64,
    /// Points closer than this (m) are coincident.
    pub dist_eps: f64,
}

impl Default for GeometryTolerances {
    fn default() -> Self {
        GeometryTolerances {
            angle_tol: 1e-8,
            dist_eps: 1e-15,
        }
    }
}

/// Where the mediator sits relative to the donor–acceptor segment when all
/// three atoms are on a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollinearArrangement {
    Between,
    BeyondAcceptor,
    BeyondDonor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleGeometry {
    pub rho_ad: f64,
    pub rho_dm: f64,
    pub rho_ma: f64,
    /// Angle at the mediator.
    pub theta_ad: f64,
    /// Angle at the acceptor.
    pub theta_dm: f64,
    /// Angle at the donor.
    pub theta_ma: f64,
    pub collinear: bool,
    pub mediator_between: bool,
}

impl TriangleGeometry {
    pub fn arrangement(&self) -> Option<CollinearArrangement> {
        if !self.collinear {
            return None;
        }
        if self.mediator_between {
            Some(CollinearArrangement::Between)
        } else if self.theta_dm > std::f64::consts::FRAC_PI_2 {
            Some(CollinearArrangement::BeyondAcceptor)
        } else {
            Some(CollinearArrangement::BeyondDonor)
        }
    }

    pub fn angle_sum(&self) -> f64 {
        self.theta_ad + self.theta_dm + self.theta_ma
    }

    /// Same triangle with donor and acceptor labels exchanged.
    pub fn swapped(&self) -> TriangleGeometry {
        TriangleGeometry {
            rho_dm: self.rho_ma,
            rho_ma: self.rho_dm,
            theta_dm: self.theta_ma,
            theta_ma: self.theta_dm,
            ..*self
        }
    }
}

/// Interior angle at `vertex` between the rays to `p` and `q`.
fn vertex_angle(vertex: Position, p: Position, q: Position) -> f64 {
    let u = p - vertex;
    let v = q - vertex;
    u.cross(v).norm().atan2(u.dot(v))
}

pub fn derive_geometry(donor: Position, acceptor: Position, mediator: Position) -> Result<TriangleGeometry> {
    derive_geometry_with(donor, acceptor, mediator, &GeometryTolerances::default())
}

pub fn derive_geometry_with(
    donor: Position,
    acceptor: Position,
    mediator: Position,
    tol: &GeometryTolerances,
) -> Result<TriangleGeometry> {
    for (name, p) in [("donor", donor), ("acceptor", acceptor), ("mediator", mediator)] {
        if !p.is_finite() {
            return Err(IcdError::invalid("position", format!("{name} position is not finite")));
        }
    }
    let rho_ad = donor.distance(acceptor);
    let rho_dm = donor.distance(mediator);
    let rho_ma = mediator.distance(acceptor);
    for (pair, d) in [("donor-acceptor", rho_ad), ("donor-mediator", rho_dm), ("mediator-acceptor", rho_ma)] {
        if d < tol.dist_eps {
            return Err(IcdError::DegenerateGeometry(format!(
                "{pair} separation {d:e} m is below {:e} m",
                tol.dist_eps
            )));
        }
    }

    let theta_ad = vertex_angle(mediator, donor, acceptor);
    let theta_dm = vertex_angle(acceptor, donor, mediator);
    let theta_ma = vertex_angle(donor, acceptor, mediator);

    let largest = theta_ad.max(theta_dm).max(theta_ma);
    let smallest = theta_ad.min(theta_dm).min(theta_ma);
    let pi = std::f64::consts::PI;
    let collinear = (pi - largest) <= tol.angle_tol || smallest <= tol.angle_tol;
    let mediator_between = collinear && (pi - theta_ad) <= tol.angle_tol;

    Ok(TriangleGeometry {
        rho_ad,
        rho_dm,
        rho_ma,
        theta_ad,
        theta_dm,
        theta_ma,
        collinear,
        mediator_between,
    })
}
