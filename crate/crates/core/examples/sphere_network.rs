//! Traces the isolines of a sphere in all three plane families and prints
//! every chain with its control points and tangents.
//!
//! ```bash
//! cargo run --example sphere_network
//! ```

use marching_surfaces::prelude::*;

fn main() -> marching_surfaces::Result<()> {
    let grid = GridSpec::new([7, 7, 7], [-3.0; 3], [1.0; 3])?;
    let field = make_analytic("sphere", &[1.0], grid)?;
    let net = CurveNetwork::build(&field, 0.0, TangentParams::default())?;
    println!(
        "{} control points, {} segments",
        net.points.len(),
        net.segment_count()
    );
    for plane in AxialPlane::ALL {
        for chain in net.chains_in(plane) {
            println!(
                "{} slice {} closed {}",
                plane.name(),
                chain.slice,
                chain.closed
            );
            for (&p, m) in chain.points.iter().zip(&chain.tangents) {
                let pos = net.points[p].position;
                println!(
                    "  point {p:2} at {:6.3} {:6.3} {:6.3}  tangent {:6.3} {:6.3} {:6.3}",
                    pos.x, pos.y, pos.z, m.x, m.y, m.z
                );
            }
        }
    }
    // one Hermite segment sampled along its length
    let chain = net.chains_in(AxialPlane::Xy).next().expect("the equator");
    let seg = HermiteSegment::new(
        net.points[chain.points[0]].position,
        net.points[chain.points[1]].position,
        chain.tangents[0],
        chain.tangents[1],
    );
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let p = seg.eval(t);
        println!("t {t:.2}: radius {:.4}", p.norm());
    }
    Ok(())
}
