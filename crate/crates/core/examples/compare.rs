//! Full comparison report for the blend field: patch counts, radial error,
//! continuity across patch boundaries and storage against marching cubes.
//!
//! ```bash
//! cargo run --release --example compare
//! ```

use marching_surfaces::cli::compare_table;
use marching_surfaces::metrics::{compare, DEFAULT_SEED};
use marching_surfaces::prelude::*;

fn main() -> marching_surfaces::Result<()> {
    let grid = GridSpec::spanning([32, 32, 32], -3.0, 3.0)?;
    let field = make_analytic("blend", &[], grid)?;
    let report = compare(&field, 0.0, &SurfaceOptions::default(), 4, DEFAULT_SEED)?;
    print!("{}", compare_table(&report));
    for bin in &report.g1.continuity.histogram {
        println!(
            "G1 {:6.1}° .. {:6.1}°: {}",
            bin.lo_deg, bin.hi_deg, bin.count
        );
    }
    Ok(())
}
