//! Two-body ICD width from atomic data, then the same pair with a helium
//! atom parked halfway between.
//!
//! ```bash
//! cargo run --example two_body_rate
//! ```

use icd::rates::{rate_trace, AcceptorSpec, DecayChannel, DonorSpec, SystemSpec};
use icd::units::{omega_from_wavelength, rate_from_width_ev, volume_from_a3, width_ev, MEGABARN};
use icd::{MediatorSpec, Position, TensorKind};

fn main() -> icd::Result<()> {
    // Ne 2s⁻¹ → 2p⁻¹ transition and a generic acceptor cross section
    let omega = omega_from_wavelength(480e-10);
    let donor = DonorSpec::new(rate_from_width_ev(1.76e-6), omega)?;
    let acceptor = AcceptorSpec::new(8.0 * MEGABARN)?;
    let channel = DecayChannel::from_atoms(&donor, &acceptor);
    let c = channel.coefficients(icd::rates::CoefficientSource::ComputedFromAtoms);
    println!("C6 = {:.4} eV A^6, C2 = {:.4e} eV A^2", c.c6_ev_a6(), c.c2_ev_a2().unwrap());

    let d = Position::ORIGIN;
    let a = Position::from_angstrom(0.0, 0.0, 6.0);
    let pair = SystemSpec { channel, donor: d, acceptor: a, mediator: None };
    let he = MediatorSpec::new(Position::from_angstrom(0.0, 0.0, 3.0), volume_from_a3(0.205))?;
    let triple = SystemSpec { mediator: Some(he), ..pair };

    println!("{:<12} {:>14} {:>14} {:>10}", "kind", "pair [eV]", "with He [eV]", "ratio");
    for kind in TensorKind::ALL {
        let r2 = rate_trace(&pair, kind, false)?;
        let r3 = rate_trace(&triple, kind, true)?;
        println!("{:<12} {:>14.6e} {:>14.6e} {:>10.6}", kind, width_ev(r2.total), width_ev(r3.total), r3.total / r2.total);
    }
    Ok(())
}
