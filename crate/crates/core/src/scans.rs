//! Parameter scans: donor–acceptor distance with a midpoint mediator, and
//! mediator position along the donor–acceptor axis or over a plane
//! containing it.
//!
//! Every scan is described by a serializable [`ScanSpec`], which is written into
//! the result metadata (`param.*` keys) so a table can be regenerated from
//! its own preamble. Rows are evaluated in parallel but always emitted in
//! grid order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{IcdError, Result};
use crate::geometry::Position;
use crate::greens::{MediatorSpec, TensorKind};
use crate::rates::{
    rate_nr_collinear, rate_r_collinear, rate_trace, DecayChannel, Placement, SystemSpec,
};
use crate::table::{Column, ScanResult, ScanRow};
use crate::units::{c6_from_ev_a6, omega_from_wavelength, volume_from_a3, wavelength_from_omega, width_ev, ANGSTROM};

/// Grid points closer than this fraction of ρ_AD to an atom are skipped.
pub const DEFAULT_EXCLUSION_FRACTION: f64 = 1e-3;

/// Transition wavelength used by the presets (Ne⁺ 2s⁻¹ → 2p⁻¹), m.
pub const NE_TRANSITION_WAVELENGTH: f64 = 480e-10;

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| if i == n - 1 { end } else { start + (end - start) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

fn check_grid(name: &str, start: f64, end: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(IcdError::InvalidRequest(format!("{name}: grid needs at least 2 points, got {n}")));
    }
    if !(start.is_finite() && end.is_finite()) || end <= start {
        return Err(IcdError::InvalidRequest(format!("{name}: empty range [{start:e}, {end:e}]")));
    }
    Ok(())
}

/// Donor at the origin, acceptor at distance ρ on the z axis, mediator at ρ/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceScan {
    pub rho_start: f64,
    pub rho_end: f64,
    pub n_points: usize,
    /// m⁶/s
    pub c6: f64,
    /// m³
    pub alpha: f64,
    pub kind: TensorKind,
    /// Only affects the retarded kinds; the static rate is independent of it at fixed C₆.
    pub omega_d: f64,
}

/// Mediator swept along the donor→acceptor axis; coordinate measured from the donor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisScan {
    pub donor: Position,
    pub acceptor: Position,
    pub s_start: f64,
    pub s_end: f64,
    pub n_points: usize,
    pub alpha: f64,
    pub omega_d: f64,
    /// m²/s, sets the absolute width columns.
    pub c2: f64,
    pub exclusion_radius: Option<f64>,
}

/// Mediator swept over the plane spanned by the donor→acceptor axis (z) and
/// a lateral direction (x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneScan {
    pub donor: Position,
    pub acceptor: Position,
    pub lateral: Position,
    pub x_start: f64,
    pub x_end: f64,
    pub nx: usize,
    pub z_start: f64,
    pub z_end: f64,
    pub nz: usize,
    pub alpha: f64,
    pub omega_d: f64,
    pub kind: TensorKind,
    pub exclusion_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scan", rename_all = "kebab-case")]
pub enum ScanSpec {
    DistanceMidpoint(DistanceScan),
    MediatorAxis(AxisScan),
    MediatorPlane(PlaneScan),
}

impl ScanSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ScanSpec::DistanceMidpoint(_) => "distance-midpoint",
            ScanSpec::MediatorAxis(_) => "mediator-axis",
            ScanSpec::MediatorPlane(_) => "mediator-plane",
        }
    }

    pub fn run(&self) -> Result<ScanResult> {
        match self {
            ScanSpec::DistanceMidpoint(s) => scan_distance_midpoint(s),
            ScanSpec::MediatorAxis(s) => scan_mediator_1d(s),
            ScanSpec::MediatorPlane(s) => scan_mediator_2d(s),
        }
    }

    /// Flat `param.*` entries describing this scan.
    pub fn to_metadata(&self) -> Vec<(String, String)> {
        let value = serde_json::to_value(self).expect("scan specs serialize");
        let mut out = Vec::new();
        if let Value::Object(map) = value {
            for (k, v) in map {
                match v {
                    Value::Object(inner) => {
                        for (k2, v2) in inner {
                            out.push((format!("param.{k}.{k2}"), scalar_to_string(&v2)));
                        }
                    }
                    other => out.push((format!("param.{k}"), scalar_to_string(&other))),
                }
            }
        }
        out
    }

    pub fn from_metadata(meta: &[(String, String)]) -> Result<Self> {
        let mut root = Map::new();
        for (key, raw) in meta {
            let Some(path) = key.strip_prefix("param.") else { continue };
            let value = serde_json::from_str::<Value>(raw).unwrap_or_else(|_| Value::String(raw.clone()));
            match path.split_once('.') {
                Some((outer, inner)) => {
                    let slot = root
                        .entry(outer.to_string())
                        .or_insert_with(|| Value::Object(Map::new()));
                    if let Value::Object(m) = slot {
                        m.insert(inner.to_string(), value);
                    }
                }
                None => {
                    root.insert(path.to_string(), value);
                }
            }
        }
        serde_json::from_value(Value::Object(root))
            .map_err(|e| IcdError::Format(format!("cannot rebuild scan from metadata: {e}")))
    }

    pub fn from_result(result: &ScanResult) -> Result<Self> {
        Self::from_metadata(&result.metadata)
    }
}

fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn new_result(spec: ScanSpec, columns: Vec<Column>, extra: Vec<(String, String)>) -> ScanResult {
    let mut meta = spec.to_metadata();
    meta.extend(extra);
    ScanResult::new(spec.name(), meta, columns)
}

pub fn scan_distance_midpoint(spec: &DistanceScan) -> Result<ScanResult> {
    check_grid("distance scan", spec.rho_start, spec.rho_end, spec.n_points)?;
    if spec.rho_start <= 0.0 {
        return Err(IcdError::InvalidRequest("distance scan: ρ must be positive".into()));
    }
    let channel = DecayChannel::from_c6(spec.c6, spec.omega_d)?;
    let c2 = channel.gamma_sigma / 4.0;
    let columns = vec![
        Column::new("rho_AD", "A"),
        Column::new("two_body", "eV"),
        Column::new("three_body_closed", "eV"),
        Column::new("three_body_trace", "eV"),
        Column::new("ratio", "1"),
        Column::new("ratio_closed", "1"),
        Column::new("u_NR", "1"),
        Column::new("u_R", "1"),
    ];
    let grid = linspace(spec.rho_start, spec.rho_end, spec.n_points);
    let rows = grid
        .par_iter()
        .map(|&rho| -> Result<ScanRow> {
            let half = rho / 2.0;
            let mediator = MediatorSpec::new(Position::new(0.0, 0.0, half), spec.alpha)?;
            let system = SystemSpec {
                channel,
                donor: Position::ORIGIN,
                acceptor: Position::new(0.0, 0.0, rho),
                mediator: Some(mediator),
            };
            let trace = rate_trace(&system, spec.kind, true)?;
            let closed = match spec.kind {
                TensorKind::NonRetarded => Some(rate_nr_collinear(rho, half, half, spec.c6, spec.alpha, true)?),
                TensorKind::FarField => Some(rate_r_collinear(
                    rho,
                    half,
                    half,
                    c2,
                    spec.alpha,
                    spec.omega_d,
                    Placement::Between,
                )?),
                TensorKind::Full => None,
            };
            let two_body = closed.map_or(trace.direct, |c| c.direct);
            Ok(ScanRow {
                values: vec![
                    rho / ANGSTROM,
                    width_ev(two_body),
                    closed.map_or(f64::NAN, |c| width_ev(c.total)),
                    width_ev(trace.total),
                    trace.normalized(),
                    closed.map_or(f64::NAN, |c| c.normalized()),
                    trace.u_nr,
                    trace.u_r.unwrap_or(f64::NAN),
                ],
                perturbative_ok: trace.perturbative_ok,
                skipped: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut result = new_result(ScanSpec::DistanceMidpoint(spec.clone()), columns, Vec::new());
    result.rows = rows;
    Ok(result)
}

fn axis_frame(donor: Position, acceptor: Position) -> Result<(f64, Position)> {
    let d = acceptor - donor;
    let rho = d.norm();
    if !(rho > 0.0) {
        return Err(IcdError::DegenerateGeometry("donor and acceptor coincide".into()));
    }
    Ok((rho, d * (1.0 / rho)))
}

fn skipped_row(mut head: Vec<f64>, width: usize) -> ScanRow {
    head.resize(width, f64::NAN);
    ScanRow {
        values: head,
        perturbative_ok: false,
        skipped: true,
    }
}

pub fn scan_mediator_1d(spec: &AxisScan) -> Result<ScanResult> {
    check_grid("axis scan", spec.s_start, spec.s_end, spec.n_points)?;
    let (rho, axis) = axis_frame(spec.donor, spec.acceptor)?;
    let channel = DecayChannel::from_c2(spec.c2, spec.omega_d)?;
    let lambda = wavelength_from_omega(spec.omega_d);
    let exclusion = spec.exclusion_radius.unwrap_or(DEFAULT_EXCLUSION_FRACTION * rho);
    let columns = vec![
        Column::new("s", "A"),
        Column::new("s_over_lambda", "1"),
        Column::new("region", "1"),
        Column::new("norm_farfield_closed", "1"),
        Column::new("norm_farfield_trace", "1"),
        Column::new("norm_full_trace", "1"),
        Column::new("width_farfield_closed", "eV"),
        Column::new("width_full_trace", "eV"),
        Column::new("u_R", "1"),
        Column::new("u_NR", "1"),
    ];
    let width = columns.len();
    let grid = linspace(spec.s_start, spec.s_end, spec.n_points);
    let rows = grid
        .par_iter()
        .map(|&s| -> Result<ScanRow> {
            // −1 beyond the donor, 0 between, +1 beyond the acceptor
            let region = if s < 0.0 {
                -1.0
            } else if s <= rho {
                0.0
            } else {
                1.0
            };
            let head = vec![s / ANGSTROM, s / lambda, region];
            if s.abs() < exclusion || (s - rho).abs() < exclusion {
                return Ok(skipped_row(head, width));
            }
            let position = spec.donor + axis * s;
            let system = SystemSpec {
                channel,
                donor: spec.donor,
                acceptor: spec.acceptor,
                mediator: Some(MediatorSpec::new(position, spec.alpha)?),
            };
            let farfield = rate_trace(&system, TensorKind::FarField, true)?;
            let full = rate_trace(&system, TensorKind::Full, true)?;
            let placement = if region == 0.0 { Placement::Between } else { Placement::Outside };
            let (rho_dm, rho_am) = (s.abs(), (rho - s).abs());
            let closed = rate_r_collinear(rho, rho_am, rho_dm, spec.c2, spec.alpha, spec.omega_d, placement)?;
            let mut values = head;
            values.extend([
                closed.normalized(),
                farfield.normalized(),
                full.normalized(),
                width_ev(closed.total),
                width_ev(full.total),
                closed.u_r.unwrap_or(f64::NAN),
                closed.u_nr,
            ]);
            Ok(ScanRow {
                values,
                perturbative_ok: closed.perturbative_ok,
                skipped: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let extra = vec![("derived.lambda_A".to_string(), format!("{:e}", lambda / ANGSTROM))];
    let mut result = new_result(ScanSpec::MediatorAxis(spec.clone()), columns, extra);
    result.rows = rows;
    Ok(result)
}

pub fn scan_mediator_2d(spec: &PlaneScan) -> Result<ScanResult> {
    check_grid("plane scan (x)", spec.x_start, spec.x_end, spec.nx)?;
    check_grid("plane scan (z)", spec.z_start, spec.z_end, spec.nz)?;
    let (rho, axis) = axis_frame(spec.donor, spec.acceptor)?;
    let lateral = spec.lateral - axis * spec.lateral.dot(axis);
    let lateral_norm = lateral.norm();
    if !(lateral_norm > 1e-12 * spec.lateral.norm()) || !(lateral_norm > 0.0) {
        return Err(IcdError::InvalidRequest("lateral direction must not be parallel to the donor-acceptor axis".into()));
    }
    let lateral = lateral * (1.0 / lateral_norm);
    let channel = DecayChannel {
        gamma_sigma: 1.0,
        omega_d: spec.omega_d,
    };
    if !(spec.omega_d.is_finite() && spec.omega_d > 0.0) {
        return Err(IcdError::invalid("omega_d", "must be positive"));
    }
    let lambda = wavelength_from_omega(spec.omega_d);
    let exclusion = spec.exclusion_radius.unwrap_or(DEFAULT_EXCLUSION_FRACTION * rho);
    let columns = vec![
        Column::new("x", "A"),
        Column::new("z", "A"),
        Column::new("x_over_lambda", "1"),
        Column::new("z_over_lambda", "1"),
        Column::new("normalized", "1"),
        Column::new("u_R", "1"),
        Column::new("u_NR", "1"),
    ];
    let width = columns.len();
    let xs = linspace(spec.x_start, spec.x_end, spec.nx);
    let zs = linspace(spec.z_start, spec.z_end, spec.nz);
    let points: Vec<(f64, f64)> = zs.iter().flat_map(|&z| xs.iter().map(move |&x| (x, z))).collect();
    let rows = points
        .par_iter()
        .map(|&(x, z)| -> Result<ScanRow> {
            let head = vec![x / ANGSTROM, z / ANGSTROM, x / lambda, z / lambda];
            let position = spec.donor + axis * z + lateral * x;
            if position.distance(spec.donor) < exclusion || position.distance(spec.acceptor) < exclusion {
                return Ok(skipped_row(head, width));
            }
            let system = SystemSpec {
                channel,
                donor: spec.donor,
                acceptor: spec.acceptor,
                mediator: Some(MediatorSpec::new(position, spec.alpha)?),
            };
            let rate = rate_trace(&system, spec.kind, true)?;
            let mut values = head;
            values.extend([rate.normalized(), rate.u_r.unwrap_or(f64::NAN), rate.u_nr]);
            Ok(ScanRow {
                values,
                perturbative_ok: rate.perturbative_ok,
                skipped: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let extra = vec![
        ("derived.lambda_A".to_string(), format!("{:e}", lambda / ANGSTROM)),
        ("layout".to_string(), "z-major".to_string()),
    ];
    let mut result = new_result(ScanSpec::MediatorPlane(spec.clone()), columns, extra);
    result.rows = rows;
    Ok(result)
}

/// Points (x, z in Å) where `column` crosses `level` along grid edges of a
/// plane scan, by linear interpolation. With `u_R` and level 1 this traces
/// the boundary of the region where the perturbative treatment breaks down.
pub fn contour_points(result: &ScanResult, column: &str, level: f64) -> Result<Vec<[f64; 2]>> {
    let spec = match ScanSpec::from_result(result)? {
        ScanSpec::MediatorPlane(p) => p,
        _ => return Err(IcdError::InvalidRequest("contours need a plane scan".into())),
    };
    let (nx, nz) = (spec.nx, spec.nz);
    let xs = result.column("x")?;
    let zs = result.column("z")?;
    let vs = result.column(column)?;
    if vs.len() != nx * nz {
        return Err(IcdError::Format("row count does not match the grid".into()));
    }
    let idx = |ix: usize, iz: usize| iz * nx + ix;
    let mut out = Vec::new();
    let mut edge = |a: usize, b: usize| {
        let (va, vb) = (vs[a] - level, vs[b] - level);
        if va.is_finite() && vb.is_finite() && va * vb < 0.0 {
            let t = va / (va - vb);
            out.push([xs[a] + t * (xs[b] - xs[a]), zs[a] + t * (zs[b] - zs[a])]);
        }
    };
    for iz in 0..nz {
        for ix in 0..nx {
            if ix + 1 < nx {
                edge(idx(ix, iz), idx(ix + 1, iz));
            }
            if iz + 1 < nz {
                edge(idx(ix, iz), idx(ix, iz + 1));
            }
        }
    }
    Ok(out)
}

/// Midpoint distance scan with the Ne–He–Ne parameters: C₆ = 3.6 eV·Å⁶,
/// α = 0.205 Å³, ρ from 5 to 15 Å in 0.1 Å steps.
pub fn figure3_preset() -> DistanceScan {
    DistanceScan {
        rho_start: 5.0 * ANGSTROM,
        rho_end: 15.0 * ANGSTROM,
        n_points: 101,
        c6: c6_from_ev_a6(3.6),
        alpha: volume_from_a3(0.205),
        kind: TensorKind::NonRetarded,
        omega_d: omega_from_wavelength(NE_TRANSITION_WAVELENGTH),
    }
}

/// Far-field axis scan: acceptor 3λ from the donor, α = (λ/4)³, mediator
/// from −2λ to 5λ in steps of λ/400.
pub fn figure4_upper_preset(lambda: f64) -> AxisScan {
    let omega = omega_from_wavelength(lambda);
    AxisScan {
        donor: Position::ORIGIN,
        acceptor: Position::new(0.0, 0.0, 3.0 * lambda),
        s_start: -2.0 * lambda,
        s_end: 5.0 * lambda,
        n_points: 2801,
        alpha: (lambda / 4.0).powi(3),
        omega_d: omega,
        c2: DecayChannel::from_c6(c6_from_ev_a6(3.6), omega).map(|c| c.gamma_sigma / 4.0).unwrap_or(1.0),
        exclusion_radius: None,
    }
}

/// Two-dimensional version of [`figure4_upper_preset`] on a λ/20 grid.
pub fn figure4_lower_preset(lambda: f64) -> PlaneScan {
    PlaneScan {
        donor: Position::ORIGIN,
        acceptor: Position::new(0.0, 0.0, 3.0 * lambda),
        lateral: Position::new(1.0, 0.0, 0.0),
        x_start: -2.0 * lambda,
        x_end: 2.0 * lambda,
        nx: 81,
        z_start: -2.0 * lambda,
        z_end: 5.0 * lambda,
        nz: 141,
        alpha: (lambda / 4.0).powi(3),
        omega_d: omega_from_wavelength(lambda),
        kind: TensorKind::FarField,
        exclusion_radius: None,
    }
}
