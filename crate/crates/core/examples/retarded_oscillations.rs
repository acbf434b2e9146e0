//! Radiative regime: acceptor three wavelengths from the donor, mediator
//! moved along the axis. Outside the pair the enhancement oscillates with
//! period λ/2; between them it does not.
//!
//! ```bash
//! cargo run --release --example retarded_oscillations
//! ```

use icd::scans::{figure4_upper_preset, scan_mediator_1d, NE_TRANSITION_WAVELENGTH};

fn main() -> icd::Result<()> {
    let table = scan_mediator_1d(&figure4_upper_preset(NE_TRANSITION_WAVELENGTH))?;
    let s = table.column("s_over_lambda")?;
    let closed = table.column("norm_farfield_closed")?;
    let full = table.column("norm_full_trace")?;
    let u = table.column("u_R")?;
    println!("{:>8} {:>10} {:>10} {:>8}", "s/lambda", "farfield", "full", "u_R");
    for i in (0..s.len()).step_by(50) {
        if closed[i].is_nan() {
            println!("{:>8.3} {:>10} {:>10} {:>8}", s[i], "atom", "", "");
            continue;
        }
        println!("{:>8.3} {:>10.4} {:>10.4} {:>8.4}", s[i], closed[i], full[i], u[i]);
    }
    Ok(())
}
