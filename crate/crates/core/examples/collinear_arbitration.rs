//! For a mediator on the donor–acceptor line the static enhancement is
//! 1 + 2u + 3u². This compares it against the full tensor trace and the
//! tempting but wrong 1 + 2u/3 + u².

use icd::rates::{rate_nr_collinear, rate_trace, DecayChannel, SystemSpec};
use icd::units::ANGSTROM;
use icd::{MediatorSpec, Position, TensorKind};

fn main() -> icd::Result<()> {
    let rho = 8.0 * ANGSTROM;
    let channel = DecayChannel::from_c6(1.0, 1.0)?;
    println!("{:>6} {:>8} {:>12} {:>12} {:>12} {:>12}", "s/rho", "u", "trace", "closed", "1+2u+3u^2", "1+2u/3+u^2");
    for (s, u) in [(0.5, 0.05), (0.3, 0.1), (0.5, 0.3), (1.4, 0.2), (-0.6, 0.4)] {
        let z = s * rho;
        let (rho_dm, rho_ma) = (z.abs(), (rho - z).abs());
        let alpha = u * rho_dm.powi(3) * rho_ma.powi(3) / rho.powi(3);
        let sys = SystemSpec {
            channel,
            donor: Position::ORIGIN,
            acceptor: Position::new(0.0, 0.0, rho),
            mediator: Some(MediatorSpec::new(Position::new(0.0, 0.0, z), alpha)?),
        };
        let trace = rate_trace(&sys, TensorKind::NonRetarded, true)?.normalized();
        let closed = rate_nr_collinear(rho, rho_dm, rho_ma, 1.0, alpha, (0.0..=1.0).contains(&s))?.normalized();
        println!(
            "{s:>6.2} {u:>8.3} {trace:>12.8} {closed:>12.8} {:>12.8} {:>12.8}",
            1.0 + 2.0 * u + 3.0 * u * u,
            1.0 + 2.0 * u / 3.0 + u * u
        );
    }
    Ok(())
}
