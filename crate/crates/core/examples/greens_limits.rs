//! The free-space dyadic Green's tensor against its static and radiative
//! limits, along an oblique direction.

use icd::greens::{g0_farfield, g0_full, g0_nonretarded};
use icd::Position;

fn main() -> icd::Result<()> {
    let omega = 1e16;
    let k = omega / icd::constants::SPEED_OF_LIGHT;
    let dir = Position::new(1.0, 2.0, 2.0) * (1.0 / 3.0);
    println!("{:>8} {:>14} {:>14}", "k rho", "|G-G_nr|/|G|", "|G-G_ff|/|G|");
    for e in -3..=3 {
        let x = 10f64.powi(e);
        let r = dir * (x / k);
        let full = g0_full(r, Position::ORIGIN, omega)?;
        let nr = g0_nonretarded(r, Position::ORIGIN, omega)?;
        let ff = g0_farfield(r, Position::ORIGIN, omega)?;
        println!("{x:>8.0e} {:>14.3e} {:>14.3e}", full.relative_distance(&nr), full.relative_distance(&ff));
    }
    Ok(())
}
