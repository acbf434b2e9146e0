//! Normalized rate over the plane containing the donor–acceptor axis, as
//! a coarse character map. `+` enhancement, `-` suppression, `o` atoms.

use icd::scans::{contour_points, figure4_lower_preset, scan_mediator_2d, NE_TRANSITION_WAVELENGTH};

fn main() -> icd::Result<()> {
    let spec = figure4_lower_preset(NE_TRANSITION_WAVELENGTH);
    let table = scan_mediator_2d(&spec)?;
    let norm = table.column("normalized")?;
    // z runs down the page, x across
    for iz in (0..spec.nz).step_by(4) {
        let line: String = (0..spec.nx)
            .step_by(2)
            .map(|ix| match norm[iz * spec.nx + ix] {
                v if v.is_nan() => 'o',
                v if v > 1.05 => '+',
                v if v < 0.95 => '-',
                _ => ' ',
            })
            .collect();
        println!("|{line}|");
    }
    let unit = contour_points(&table, "normalized", 1.0)?;
    let strong = contour_points(&table, "u_R", 1.0)?;
    println!("{} grid-edge crossings of ratio = 1, {} of u_R = 1", unit.len(), strong.len());
    Ok(())
}
