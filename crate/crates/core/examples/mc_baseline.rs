//! Runs the marching cubes baseline and the patch surface on the same
//! sphere and compares their distance to the true surface.
//!
//! ```bash
//! cargo run --release --example mc_baseline
//! ```

use marching_surfaces::field::Analytic;
use marching_surfaces::metrics::{radial_error, DEFAULT_SEED};
use marching_surfaces::prelude::*;

fn main() -> marching_surfaces::Result<()> {
    let sphere = Analytic::from_name("sphere", &[1.3])?;
    for n in [9, 17, 33] {
        let field = make_analytic("sphere", &[1.3], GridSpec::spanning([n; 3], -3.0, 3.0)?)?;
        let mc = marching_cubes(&field, 0.0);
        let surface = Surface::extract(&field, 0.0, &SurfaceOptions::default())?;
        let patches = surface.tessellate(4)?;
        let (e_mc, e_g1) = (
            radial_error(&mc, &sphere, DEFAULT_SEED)?,
            radial_error(&patches, &sphere, DEFAULT_SEED)?,
        );
        println!(
            "{n:2}³: MC {:5} triangles max error {:.4}, G1 {:5} triangles max error {:.4}",
            mc.triangles.len(),
            e_mc.max,
            patches.triangles.len(),
            e_g1.max
        );
    }
    Ok(())
}
