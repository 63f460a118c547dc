//! Extracts the sphere and hyperboloid blend on a 32³ grid, summarises its
//! curve network and patches, and prints the size of both JSON artifacts.
//!
//! ```bash
//! cargo run --release --example blend_network
//! ```

use std::collections::BTreeMap;

use marching_surfaces::prelude::*;

fn main() -> marching_surfaces::Result<()> {
    let grid = GridSpec::spanning([32, 32, 32], -3.0, 3.0)?;
    let field = make_analytic("blend", &[], grid)?;
    let surface = Surface::extract(&field, 0.0, &SurfaceOptions::default())?;
    let net = &surface.network;
    for plane in AxialPlane::ALL {
        let chains: Vec<_> = net.chains_in(plane).collect();
        let closed = chains.iter().filter(|c| c.closed).count();
        let segments: usize = chains.iter().map(|c| c.segment_count()).sum();
        println!(
            "{}: {} chains ({closed} closed), {segments} segments",
            plane.name(),
            chains.len()
        );
    }
    let mut sides = BTreeMap::new();
    for p in &surface.patches {
        *sides.entry(p.k()).or_insert(0) += 1;
    }
    println!(
        "{} patches by side count {sides:?}, {} diagnostics",
        surface.patches.len(),
        surface.diagnostics.len()
    );
    let (network, patches) = (surface.network_json()?, surface.patch_json()?);
    println!(
        "network.json {} bytes, patches.json {} bytes",
        network.len(),
        patches.len()
    );
    Ok(())
}
