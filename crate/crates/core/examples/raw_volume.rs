//! Writes a sampled field as a raw volume with its JSON sidecar, reads it
//! back and extracts it, then tessellates the result to OBJ and PLY.
//!
//! ```bash
//! cargo run --example raw_volume
//! ```

use marching_surfaces::field::{load_raw, write_raw, RawDtype, RawHeader};
use marching_surfaces::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("marching-surfaces-example");
    std::fs::create_dir_all(&dir)?;

    // a ball of radius 1.5 as 8-bit density, dense in the middle
    let grid = GridSpec::spanning([24, 24, 24], -2.0, 2.0)?;
    let samples = grid
        .points()
        .map(|p| (255.0 * (1.0 - grid.world(p).norm() / 3.0).max(0.0)).round())
        .collect();
    let field = ScalarField::from_samples(grid, samples)?;
    let path = dir.join("ball.raw");
    write_raw(&field, &path, RawDtype::Uint8)?;

    let header = RawHeader::read(&RawHeader::sidecar_path(&path))?;
    let volume = load_raw(&path, &header)?;
    let iso = 255.0 * 0.5;
    let surface = Surface::extract(&volume, iso, &SurfaceOptions::default())?;
    println!(
        "{}: {} patches, {} diagnostics",
        path.display(),
        surface.patches.len(),
        surface.diagnostics.len()
    );

    let mesh = surface.tessellate(4)?;
    for format in [MeshFormat::Obj, MeshFormat::Ply] {
        let out = dir.join(format!("ball.{format:?}").to_lowercase());
        mesh.write(&out, format)?;
        println!(
            "{}: {} vertices, {} triangles",
            out.display(),
            mesh.vertices.len(),
            mesh.triangles.len()
        );
    }
    Ok(())
}
