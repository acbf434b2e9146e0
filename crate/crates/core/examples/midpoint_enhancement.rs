//! Enhancement of Ne–Ne ICD by a helium atom at the midpoint, 5 to 15 Å.
//! Writes the full table to `midpoint.csv` when given a path.
//!
//! ```bash
//! cargo run --example midpoint_enhancement -- midpoint.csv
//! ```

use icd::scans::{figure3_preset, scan_distance_midpoint};
use icd::table::write_atomic;

fn main() -> icd::Result<()> {
    let table = scan_distance_midpoint(&figure3_preset())?;
    let rho = table.column("rho_AD")?;
    let two = table.column("two_body")?;
    let three = table.column("three_body_trace")?;
    let ratio = table.column("ratio")?;
    let u = table.column("u_NR")?;
    println!("{:>6} {:>12} {:>12} {:>8} {:>8}", "rho/A", "2-body/eV", "3-body/eV", "ratio", "u_NR");
    for i in (0..rho.len()).step_by(10) {
        println!("{:>6.1} {:>12.4e} {:>12.4e} {:>8.4} {:>8.4}", rho[i], two[i], three[i], ratio[i], u[i]);
    }
    if let Some(path) = std::env::args().nth(1) {
        write_atomic(path.as_ref(), table.to_csv_string().as_bytes())?;
        println!("wrote {path}");
    }
    Ok(())
}
