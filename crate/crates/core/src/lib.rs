//! Interatomic Coulombic decay (ICD) rates in the virtual-photon picture.
//!
//! A donor atom relaxes and hands its energy to an acceptor through the
//! electromagnetic field; an optional third, ICD-inactive mediator atom
//! scatters the exchanged photon. The crate provides
//!
//! - free-space dyadic Green's tensors and the single-scatterer Born term ([`greens`]),
//! - the trace-formula rate and its static / far-field closed forms ([`rates`]),
//! - distance and mediator-position scans plus C₆ extraction from width data ([`scans`], [`fit`]),
//! - the `icd` command-line front end ([`cli`]).
//!
//! Everything inside the library is SI; the I/O layers accept Å, eV, Å³ and Mb.

pub mod cli;
pub mod constants;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod greens;
pub mod rates;
pub mod scans;
pub mod table;
pub mod tensor;
pub mod units;

pub use error::{IcdError, Result};
pub use geometry::{derive_geometry, Position, TriangleGeometry};
pub use greens::{g0_farfield, g0_full, g0_nonretarded, g1_with_mediator, MediatorSpec, TensorKind};
pub use rates::{
    rate_nr_collinear, rate_nr_general, rate_r_collinear, rate_trace, DecayChannel, RateBreakdown,
    RateCoefficients, SystemSpec,
};
pub use tensor::ComplexTensor3;
