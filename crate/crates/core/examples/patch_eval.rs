//! Builds the patches of a coarse sphere, evaluates one of them in G⁰ and
//! G¹ mode across its footprint, and prints the blending weights.
//!
//! ```bash
//! cargo run --example patch_eval
//! ```

use marching_surfaces::patch::{weights, Footprint, Vec2};
use marching_surfaces::prelude::*;

fn main() -> marching_surfaces::Result<()> {
    let grid = GridSpec::new([7, 7, 7], [-3.0; 3], [1.0; 3])?;
    let field = make_analytic("sphere", &[1.0], grid)?;
    let signs = classify(&field, 0.0);
    let net = CurveNetwork::build_with_signs(&field, &signs, TangentParams::default());
    let loops = LoopSet::build(&net, &signs)?;
    let lp = loops.patchable().next().expect("a sphere octant");
    println!(
        "cell {:?}: {} sides, nodes {:?}",
        lp.cell,
        lp.len(),
        lp.nodes()
    );

    let g1 = MultiSidedPatch::new(lp, &PatchParams::default())?;
    let g0 = g1.with_mode(PatchMode::G0);
    let fp = Footprint::regular(lp.len())?;
    let c = fp.centroid();
    for r in [0.0, 0.25, 0.5, 0.75, 0.95] {
        let u = c + (fp.side_point(0, 0.5) - c) * r;
        let (p0, p1) = (g0.eval(&u)?, g1.eval(&u)?);
        println!(
            "toward side 0 at {r:.2}: G0 radius {:.4}, G1 radius {:.4}",
            p0.norm(),
            p1.norm()
        );
    }

    for k in 3..=6 {
        let fp = Footprint::regular(k)?;
        let u = Vec2::new(0.1, -0.05);
        let w = weights(&fp.side_frames(&u)?);
        let sum: f64 = w.iter().sum();
        println!("{k}-gon weights {:.3?} sum {sum:.15}", w.as_slice());
    }
    Ok(())
}
