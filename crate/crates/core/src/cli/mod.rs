//! The `icd` command-line front end.
//!
//! Subcommands: `rate` (one configuration), `scan` (figure presets or custom
//! grids, written as CSV or JSON) and `fit` (C₆ from a width table).
//! Flags default to Å, eV, Å³ and Mb; SI values are accepted with explicit
//! unit suffixes (`1e-9m`, `2.5e15/s`, ...).
//!
//! Exit codes: 0 success, 1 usage, 2 physics-domain error, 3 I/O.

mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::IcdError;
use crate::fit::{fit_c6, C6Fit, WidthDataset};
use crate::geometry::{derive_geometry, CollinearArrangement, Position};
use crate::greens::{MediatorSpec, TensorKind};
use crate::rates::{
    rate_nr_general, rate_r_collinear, rate_trace, select_kind, AcceptorSpec, CoefficientSource, DecayChannel,
    DonorSpec, Placement, RateBreakdown, RateCoefficients, SystemSpec,
};
use crate::scans::{
    self, figure3_preset, figure4_lower_preset, figure4_upper_preset, AxisScan, DistanceScan, PlaneScan, ScanSpec,
    NE_TRANSITION_WAVELENGTH,
};
use crate::table::write_atomic;
use crate::units::{
    c6_to_ev_a6, omega_from_wavelength, parse_quantity, volume_to_a3, wavelength_from_omega, width_ev,
    QuantityKind, ANGSTROM,
};

pub use config::{expand_config, parse_config};

/// Environment variable naming the directory scans are written to when no
/// `--output` is given.
pub const OUTPUT_DIR_ENV: &str = "ICD_OUTPUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Physics(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Physics(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Physics(m) | CliError::Io(m) => m,
        }
    }
}

impl From<IcdError> for CliError {
    fn from(e: IcdError) -> Self {
        let msg = e.to_string();
        match e {
            IcdError::DegenerateGeometry(_)
            | IcdError::Singular { .. }
            | IcdError::InvalidParameter { .. }
            | IcdError::NotCollinear(_) => CliError::Physics(msg),
            IcdError::UnknownUnit(_) | IcdError::InvalidRequest(_) => CliError::Usage(msg),
            IcdError::Format(_) | IcdError::Io(_) | IcdError::Csv(_) | IcdError::Json(_) => CliError::Io(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "icd", version, about = "Interatomic Coulombic decay rates with an optional mediator atom")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate for a single donor/acceptor/(mediator) configuration.
    Rate(RateArgs),
    /// Distance or mediator-position scans.
    Scan(ScanArgs),
    /// Fit C6 to a table of decay widths.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Auto,
    Nonretarded,
    Farfield,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[value(name = "3")]
    Three,
    #[value(name = "4-upper")]
    FourUpper,
    #[value(name = "4-lower")]
    FourLower,
}

/// Either atomic data (γ_D, σ_A, ω_D) or two-body coefficients.
#[derive(Debug, Clone, Default, Args)]
pub struct CouplingArgs {
    /// Donor free-space decay rate, as a width in eV (or with `/s`).
    #[arg(long)]
    pub gamma_d: Option<String>,
    /// Acceptor photoionization cross section in Mb (or `m2`, `A2`).
    #[arg(long)]
    pub sigma_a: Option<String>,
    /// Donor transition energy in eV (or `rad/s`, `Hz`).
    #[arg(long)]
    pub omega_d: Option<String>,
    /// Donor transition wavelength in Å (or `nm`, `m`).
    #[arg(long)]
    pub wavelength_d: Option<String>,
    /// Static two-body coefficient in eV·Å⁶ (or `m6/s`).
    #[arg(long)]
    pub c6: Option<String>,
    /// Far-field two-body coefficient in eV·Å² (or `m2/s`).
    #[arg(long)]
    pub c2: Option<String>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// Donor position x,y,z (Å).
    #[arg(long, allow_hyphen_values = true)]
    pub pos_d: String,
    /// Acceptor position x,y,z (Å).
    #[arg(long, allow_hyphen_values = true)]
    pub pos_a: String,
    /// Mediator position x,y,z (Å); omit for the two-body rate.
    #[arg(long, allow_hyphen_values = true)]
    pub pos_m: Option<String>,
    /// Mediator polarizability volume (Å³).
    #[arg(long)]
    pub alpha: Option<String>,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    #[arg(long, value_enum, default_value = "auto")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct ScanArgs {
    /// Built-in parameter set reproducing one of the reference figures.
    #[arg(long, value_enum)]
    pub figure: Option<Figure>,
    /// Transition wavelength for the `4-*` presets (Å).
    #[arg(long)]
    pub wavelength_d: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub target: Option<ScanTarget>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; `-` for stdout. Defaults to $ICD_OUTPUT_DIR/<scan>.<ext>.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
}

#[derive(Debug, Subcommand)]
pub enum ScanTarget {
    /// Donor–acceptor distance with the mediator at the midpoint.
    Distance {
        #[arg(long)]
        rho_start: String,
        #[arg(long)]
        rho_end: String,
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[arg(long, default_value = "0")]
        alpha: String,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long, value_enum, default_value = "nonretarded")]
        kind: KindArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mediator moved along the donor–acceptor axis (coordinate from the donor).
    Axis {
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        pos_d: String,
        #[arg(long, allow_hyphen_values = true)]
        pos_a: String,
        #[arg(long, allow_hyphen_values = true)]
        s_start: String,
        #[arg(long, allow_hyphen_values = true)]
        s_end: String,
        #[arg(long, default_value_t = 1001)]
        n: usize,
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Radius around each atom where grid points are skipped (Å).
        #[arg(long)]
        exclusion: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mediator moved over a plane containing the donor–acceptor axis.
    Plane {
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        pos_d: String,
        #[arg(long, allow_hyphen_values = true)]
        pos_a: String,
        /// In-plane direction perpendicular to the axis.
        #[arg(long, allow_hyphen_values = true, default_value = "1,0,0")]
        lateral: String,
        #[arg(long, allow_hyphen_values = true)]
        x_start: String,
        #[arg(long, allow_hyphen_values = true)]
        x_end: String,
        #[arg(long, default_value_t = 81)]
        nx: usize,
        #[arg(long, allow_hyphen_values = true)]
        z_start: String,
        #[arg(long, allow_hyphen_values = true)]
        z_end: String,
        #[arg(long, default_value_t = 141)]
        nz: usize,
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long, value_enum, default_value = "farfield")]
        kind: KindArg,
        #[arg(long)]
        exclusion: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with header `rho_AA,width_eV`.
    #[arg(long)]
    pub input: PathBuf,
    /// Smallest distance (Å) included in the fit.
    #[arg(long, default_value = "0")]
    pub rho_min: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
}

/// Parses arguments (after config expansion) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let result = expand_config(args).and_then(|args| match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out, err),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                Ok(())
            } else {
                Err(CliError::Usage(e.to_string()))
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message().trim_end());
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Rate(a) => cmd_rate(a, out, err),
        Command::Scan(a) => cmd_scan(a, out, err),
        Command::Fit(a) => cmd_fit(a, out),
    }
}

fn parse_position(text: &str) -> Result<Position, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("position `{text}` must be x,y,z")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(parts) {
        *slot = parse_quantity(p, QuantityKind::Length)?;
    }
    Ok(Position::from_array(v))
}

fn quantity(text: &str, kind: QuantityKind) -> Result<f64, CliError> {
    Ok(parse_quantity(text, kind)?)
}

/// A decay channel plus whether its frequency came from the user.
#[derive(Debug, Clone, Copy)]
pub struct ResolvedCoupling {
    pub channel: DecayChannel,
    pub omega_known: bool,
    pub source: CoefficientSource,
}

impl CouplingArgs {
    pub fn resolve(&self) -> Result<ResolvedCoupling, CliError> {
        let atoms = self.gamma_d.is_some() || self.sigma_a.is_some();
        let coeffs = self.c6.is_some() || self.c2.is_some();
        if atoms && coeffs {
            return Err(CliError::Usage(
                "give either atomic data (--gamma-d, --sigma-a) or coefficients (--c6/--c2), not both".into(),
            ));
        }
        let omega = match (&self.omega_d, &self.wavelength_d) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("--omega-d and --wavelength-d are mutually exclusive".into()))
            }
            (Some(o), None) => Some(quantity(o, QuantityKind::Spectral)?),
            (None, Some(l)) => Some(omega_from_wavelength(quantity(l, QuantityKind::Length)?)),
            (None, None) => None,
        };
        if atoms {
            let (Some(g), Some(s), Some(w)) = (&self.gamma_d, &self.sigma_a, omega) else {
                return Err(CliError::Usage(
                    "atomic data needs --gamma-d, --sigma-a and one of --omega-d/--wavelength-d".into(),
                ));
            };
            let donor = DonorSpec::new(quantity(g, QuantityKind::Rate)?, w)?;
            let acceptor = AcceptorSpec::new(quantity(s, QuantityKind::CrossSection)?)?;
            return Ok(ResolvedCoupling {
                channel: DecayChannel::from_atoms(&donor, &acceptor),
                omega_known: true,
                source: CoefficientSource::ComputedFromAtoms,
            });
        }
        let c6 = self.c6.as_deref().map(|s| quantity(s, QuantityKind::C6)).transpose()?;
        let c2 = self.c2.as_deref().map(|s| quantity(s, QuantityKind::C2)).transpose()?;
        let source = CoefficientSource::UserSupplied;
        let resolved = match (c6, c2, omega) {
            (None, None, _) => {
                return Err(CliError::Usage(
                    "missing coupling: give --c6/--c2 or --gamma-d, --sigma-a and a frequency".into(),
                ))
            }
            (Some(c6), Some(c2), Some(w)) => {
                let ch = DecayChannel::from_c6(c6, w)?;
                if ((ch.gamma_sigma / 4.0) / c2 - 1.0).abs() > 1e-6 {
                    return Err(CliError::Usage("--c6, --c2 and the transition frequency are inconsistent".into()));
                }
                ResolvedCoupling { channel: ch, omega_known: true, source }
            }
            (Some(c6), Some(c2), None) => ResolvedCoupling {
                channel: DecayChannel::from_c6_c2(c6, c2)?,
                omega_known: true,
                source,
            },
            (Some(c6), None, w) => ResolvedCoupling {
                channel: DecayChannel::from_c6(c6, w.unwrap_or_else(|| omega_from_wavelength(NE_TRANSITION_WAVELENGTH)))?,
                omega_known: w.is_some(),
                source,
            },
            (None, Some(c2), Some(w)) => ResolvedCoupling {
                channel: DecayChannel::from_c2(c2, w)?,
                omega_known: true,
                source,
            },
            (None, Some(_), None) => {
                return Err(CliError::Usage("--c2 needs --omega-d or --wavelength-d".into()))
            }
        };
        Ok(resolved)
    }
}

/// Without a user frequency only the static kind is meaningful.
fn resolve_kind(kind: KindArg, coupling: &ResolvedCoupling, system: Option<&SystemSpec>) -> Result<TensorKind, CliError> {
    let needs_omega = |k: TensorKind| {
        if coupling.omega_known {
            Ok(k)
        } else {
            Err(CliError::Usage(format!("--kind {k} needs --omega-d or --wavelength-d")))
        }
    };
    match kind {
        KindArg::Nonretarded => Ok(TensorKind::NonRetarded),
        KindArg::Farfield => needs_omega(TensorKind::FarField),
        KindArg::Full => needs_omega(TensorKind::Full),
        KindArg::Auto => match system {
            Some(s) if coupling.omega_known => Ok(select_kind(s)),
            _ => Ok(TensorKind::NonRetarded),
        },
    }
}

#[derive(Debug, Serialize)]
pub struct Widths {
    pub total: f64,
    pub direct: f64,
    pub cross: f64,
    pub scattered: f64,
}

#[derive(Debug, Serialize)]
pub struct ClosedFormCheck {
    pub formula: &'static str,
    pub total_width_ev: f64,
    pub relative_difference: f64,
}

#[derive(Debug, Serialize)]
pub struct RateReport {
    pub kind: TensorKind,
    pub requested_kind: String,
    pub positions_angstrom: [[f64; 3]; 3],
    pub alpha_a3: f64,
    pub rho_ad_angstrom: f64,
    pub rho_dm_angstrom: Option<f64>,
    pub rho_ma_angstrom: Option<f64>,
    pub angles_deg: Option<[f64; 3]>,
    pub c6_ev_a6: f64,
    pub c2_ev_a2: Option<f64>,
    pub wavelength_angstrom: Option<f64>,
    pub rate_per_s: RateBreakdown,
    pub widths_ev: Widths,
    pub ratio_to_two_body: f64,
    pub closed_form: Option<ClosedFormCheck>,
}

fn closed_form_check(system: &SystemSpec, kind: TensorKind, coeffs: &RateCoefficients) -> Result<Option<(&'static str, f64)>, CliError> {
    let rho_ad = system.donor.distance(system.acceptor);
    let Some(m) = system.mediator else {
        return Ok(match kind {
            TensorKind::NonRetarded => Some(("C6/rho^6", coeffs.c6 / rho_ad.powi(6))),
            TensorKind::FarField => coeffs.c2.map(|c2| ("C2/rho^2", c2 / (rho_ad * rho_ad))),
            TensorKind::Full => None,
        });
    };
    let geom = derive_geometry(system.donor, system.acceptor, m.position)?;
    match kind {
        TensorKind::NonRetarded => Ok(Some(("non-retarded triangle", rate_nr_general(&geom, coeffs.c6, m.alpha)?.total))),
        TensorKind::FarField => {
            let (Some(arr), Some(c2)) = (geom.arrangement(), coeffs.c2) else { return Ok(None) };
            let placement = if arr == CollinearArrangement::Between { Placement::Between } else { Placement::Outside };
            let r = rate_r_collinear(geom.rho_ad, geom.rho_ma, geom.rho_dm, c2, m.alpha, system.channel.omega_d, placement)?;
            Ok(Some(("retarded collinear", r.total)))
        }
        TensorKind::Full => Ok(None),
    }
}

pub fn cmd_rate(args: &RateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let coupling = args.coupling.resolve()?;
    let donor = parse_position(&args.pos_d)?;
    let acceptor = parse_position(&args.pos_a)?;
    let mediator = match (&args.pos_m, &args.alpha) {
        (Some(p), a) => {
            let alpha = a.as_deref().map(|s| quantity(s, QuantityKind::Volume)).transpose()?.unwrap_or(0.0);
            Some(MediatorSpec::new(parse_position(p)?, alpha)?)
        }
        (None, Some(_)) => return Err(CliError::Usage("--alpha given without --pos-m".into())),
        (None, None) => None,
    };
    let system = SystemSpec {
        channel: coupling.channel,
        donor,
        acceptor,
        mediator,
    };
    let kind = resolve_kind(args.kind, &coupling, Some(&system))?;
    let rate = rate_trace(&system, kind, true)?;
    let mut coeffs = coupling.channel.coefficients(coupling.source);
    if !coupling.omega_known {
        coeffs.c2 = None;
    }
    let geom = mediator.map(|m| derive_geometry(donor, acceptor, m.position)).transpose()?;
    let closed = closed_form_check(&system, kind, &coeffs)?.map(|(formula, total)| ClosedFormCheck {
        formula,
        total_width_ev: width_ev(total),
        relative_difference: if rate.total == 0.0 { 0.0 } else { (total - rate.total) / rate.total },
    });
    let mut rate_per_s = rate;
    if !coupling.omega_known {
        rate_per_s.u_r = None;
    }
    let report = RateReport {
        kind,
        requested_kind: format!("{:?}", args.kind).to_lowercase(),
        positions_angstrom: [
            donor.to_angstrom(),
            acceptor.to_angstrom(),
            mediator.map_or([f64::NAN; 3], |m| m.position.to_angstrom()),
        ],
        alpha_a3: mediator.map_or(0.0, |m| volume_to_a3(m.alpha)),
        rho_ad_angstrom: donor.distance(acceptor) / ANGSTROM,
        rho_dm_angstrom: geom.map(|g| g.rho_dm / ANGSTROM),
        rho_ma_angstrom: geom.map(|g| g.rho_ma / ANGSTROM),
        angles_deg: geom.map(|g| [g.theta_ad.to_degrees(), g.theta_dm.to_degrees(), g.theta_ma.to_degrees()]),
        c6_ev_a6: c6_to_ev_a6(coeffs.c6),
        c2_ev_a2: coeffs.c2_ev_a2(),
        wavelength_angstrom: coupling
            .omega_known
            .then(|| wavelength_from_omega(coupling.channel.omega_d) / ANGSTROM),
        rate_per_s,
        widths_ev: Widths {
            total: width_ev(rate.total),
            direct: width_ev(rate.direct),
            cross: width_ev(rate.cross),
            scattered: width_ev(rate.scattered),
        },
        ratio_to_two_body: rate.normalized(),
        closed_form: closed,
    };
    if !rate.perturbative_ok {
        writeln!(
            err,
            "warning: mediator coupling u >= 1 (u_NR = {:.4}, u_R = {}); first-order Born result is unreliable",
            rate.u_nr,
            rate_per_s.u_r.map_or("n/a".to_string(), |u| format!("{u:.4}"))
        )?;
    }
    match args.format {
        ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(IcdError::from)?)?,
        ReportFormat::Text => write_rate_text(&report, out)?,
    }
    Ok(())
}

fn write_rate_text(r: &RateReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "tensor kind        {} (requested {})", r.kind, r.requested_kind)?;
    writeln!(out, "rho_AD             {} A", r.rho_ad_angstrom)?;
    if let (Some(dm), Some(ma), Some(th)) = (r.rho_dm_angstrom, r.rho_ma_angstrom, r.angles_deg) {
        writeln!(out, "rho_DM, rho_MA     {dm} A, {ma} A")?;
        writeln!(out, "theta_AD/DM/MA     {:.6} / {:.6} / {:.6} deg", th[0], th[1], th[2])?;
        writeln!(out, "alpha              {:.6} A^3", r.alpha_a3)?;
    }
    writeln!(out, "C6                 {:.6e} eV A^6", r.c6_ev_a6)?;
    if let Some(c2) = r.c2_ev_a2 {
        writeln!(out, "C2                 {c2:.6e} eV A^2")?;
    }
    if let Some(l) = r.wavelength_angstrom {
        writeln!(out, "wavelength         {l:.6} A")?;
    }
    writeln!(out, "total              {:.6e} 1/s   width {:.6e} eV", r.rate_per_s.total, r.widths_ev.total)?;
    writeln!(out, "  direct  (a^0)    {:.6e} eV", r.widths_ev.direct)?;
    writeln!(out, "  cross   (a^1)    {:.6e} eV", r.widths_ev.cross)?;
    writeln!(out, "  scatter (a^2)    {:.6e} eV", r.widths_ev.scattered)?;
    writeln!(out, "ratio to two-body  {:.6}", r.ratio_to_two_body)?;
    writeln!(out, "u_NR               {:.6e}", r.rate_per_s.u_nr)?;
    if let Some(u) = r.rate_per_s.u_r {
        writeln!(out, "u_R                {u:.6e}")?;
    }
    writeln!(
        out,
        "perturbative       {} (quantitative: {})",
        r.rate_per_s.perturbative_ok, r.rate_per_s.quantitative_ok
    )?;
    if let Some(c) = &r.closed_form {
        writeln!(
            out,
            "closed form        {} -> {:.6e} eV (relative difference {:.2e})",
            c.formula, c.total_width_ev, c.relative_difference
        )?;
    }
    Ok(())
}

fn scan_spec_from_args(args: &ScanArgs) -> Result<(ScanSpec, String, OutputArgs), CliError> {
    if let Some(fig) = args.figure {
        let lambda = args
            .wavelength_d
            .as_deref()
            .map(|s| quantity(s, QuantityKind::Length))
            .transpose()?
            .unwrap_or(NE_TRANSITION_WAVELENGTH);
        let (spec, name) = match fig {
            Figure::Three => (ScanSpec::DistanceMidpoint(figure3_preset()), "figure3"),
            Figure::FourUpper => (ScanSpec::MediatorAxis(figure4_upper_preset(lambda)), "figure4-upper"),
            Figure::FourLower => (ScanSpec::MediatorPlane(figure4_lower_preset(lambda)), "figure4-lower"),
        };
        return Ok((spec, name.to_string(), args.output.clone()));
    }
    let Some(target) = &args.target else {
        return Err(CliError::Usage("scan needs --figure or one of: distance, axis, plane".into()));
    };
    let len = |s: &str| quantity(s, QuantityKind::Length);
    let vol = |s: &str| quantity(s, QuantityKind::Volume);
    match target {
        ScanTarget::Distance { rho_start, rho_end, n, alpha, coupling, kind, output } => {
            let c = coupling.resolve()?;
            let kind = resolve_kind(*kind, &c, None)?;
            let spec = DistanceScan {
                rho_start: len(rho_start)?,
                rho_end: len(rho_end)?,
                n_points: *n,
                c6: c.channel.coefficients(c.source).c6,
                alpha: vol(alpha)?,
                kind,
                omega_d: c.channel.omega_d,
            };
            Ok((ScanSpec::DistanceMidpoint(spec), "distance-midpoint".into(), output.clone()))
        }
        ScanTarget::Axis { pos_d, pos_a, s_start, s_end, n, alpha, coupling, exclusion, output } => {
            let c = coupling.resolve()?;
            if !c.omega_known {
                return Err(CliError::Usage("axis scans need --omega-d or --wavelength-d".into()));
            }
            let spec = AxisScan {
                donor: parse_position(pos_d)?,
                acceptor: parse_position(pos_a)?,
                s_start: len(s_start)?,
                s_end: len(s_end)?,
                n_points: *n,
                alpha: vol(alpha)?,
                omega_d: c.channel.omega_d,
                c2: c.channel.gamma_sigma / 4.0,
                exclusion_radius: exclusion.as_deref().map(len).transpose()?,
            };
            Ok((ScanSpec::MediatorAxis(spec), "mediator-axis".into(), output.clone()))
        }
        ScanTarget::Plane {
            pos_d,
            pos_a,
            lateral,
            x_start,
            x_end,
            nx,
            z_start,
            z_end,
            nz,
            alpha,
            coupling,
            kind,
            exclusion,
            output,
        } => {
            let omega = match (&coupling.omega_d, &coupling.wavelength_d) {
                (Some(o), None) => quantity(o, QuantityKind::Spectral)?,
                (None, Some(l)) => omega_from_wavelength(len(l)?),
                _ => return Err(CliError::Usage("plane scans need exactly one of --omega-d/--wavelength-d".into())),
            };
            let kind = match kind {
                KindArg::Farfield => TensorKind::FarField,
                KindArg::Full => TensorKind::Full,
                KindArg::Nonretarded => TensorKind::NonRetarded,
                KindArg::Auto => TensorKind::Full,
            };
            let lat: Vec<f64> = lateral
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage(format!("bad --lateral `{lateral}`")))?;
            if lat.len() != 3 {
                return Err(CliError::Usage("--lateral must be x,y,z".into()));
            }
            let spec = PlaneScan {
                donor: parse_position(pos_d)?,
                acceptor: parse_position(pos_a)?,
                lateral: Position::new(lat[0], lat[1], lat[2]),
                x_start: len(x_start)?,
                x_end: len(x_end)?,
                nx: *nx,
                z_start: len(z_start)?,
                z_end: len(z_end)?,
                nz: *nz,
                alpha: vol(alpha)?,
                omega_d: omega,
                kind,
                exclusion_radius: exclusion.as_deref().map(len).transpose()?,
            };
            Ok((ScanSpec::MediatorPlane(spec), "mediator-plane".into(), output.clone()))
        }
    }
}

pub fn cmd_scan(args: &ScanArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<(), CliError> {
    let (spec, name, output) = scan_spec_from_args(args)?;
    let result = spec.run()?;
    let body = match output.format {
        TableFormat::Csv => result.to_csv_string(),
        TableFormat::Json => result.to_json_string()? + "\n",
    };
    let ext = match output.format {
        TableFormat::Csv => "csv",
        TableFormat::Json => "json",
    };
    let path = match &output.output {
        Some(p) if p.as_os_str() == "-" => {
            out.write_all(body.as_bytes())?;
            return Ok(());
        }
        Some(p) => p.clone(),
        None => {
            let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            dir.join(format!("{name}.{ext}"))
        }
    };
    write_atomic(&path, body.as_bytes())?;
    let skipped = result.rows.iter().filter(|r| r.skipped).count();
    let flagged = result.rows.iter().filter(|r| !r.skipped && !r.perturbative_ok).count();
    writeln!(out, "scan {} -> {}", result.kind, path.display())?;
    writeln!(out, "rows {} (skipped {skipped}, u >= 1 on {flagged})", result.rows.len())?;
    for (k, v) in &result.metadata {
        writeln!(out, "  {k} = {v}")?;
    }
    let units: Vec<String> = result.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)).collect();
    writeln!(out, "columns {}", units.join(", "))?;
    if let ScanSpec::MediatorPlane(_) = spec {
        let boundary = scans::contour_points(&result, "u_R", 1.0)?;
        writeln!(out, "u_R = 1 boundary crossings {}", boundary.len())?;
    }
    Ok(())
}

pub fn cmd_fit(args: &FitArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let data = WidthDataset::from_path(&args.input)?;
    let fit: C6Fit = fit_c6(&data, args.rho_min)?;
    match args.format {
        ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&fit).map_err(IcdError::from)?)?,
        ReportFormat::Text => {
            writeln!(out, "input              {} ({} rows)", fit.source, data.rows.len())?;
            writeln!(out, "C6                 {:.6e} eV A^6", fit.c6_ev_a6)?;
            writeln!(out, "C6 (SI)            {:.6e} m^6/s", fit.coefficients.c6)?;
            writeln!(out, "rms residual       {:.6e} eV", fit.rms_residual_ev)?;
            writeln!(
                out,
                "rows used          {} with rho in [{}, {}] A (rho-min {} A)",
                fit.n_used, fit.rho_min_used, fit.rho_max_used, fit.rho_min_fit
            )?;
            writeln!(out, "estimator          {}", fit.estimator)?;
        }
    }
    Ok(())
}
