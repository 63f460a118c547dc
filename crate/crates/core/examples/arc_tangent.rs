//! Fits circular arcs through point triples and shows how the tangent
//! length rule reacts to the turning angle and to uneven spacing.
//!
//! ```bash
//! cargo run --example arc_tangent
//! ```

use marching_surfaces::curvenet::{chain_tangents, fit_arc};
use marching_surfaces::prelude::*;

fn main() {
    // three points on the unit circle: the tangent is orthogonal to the radius
    let (a, b, c) = (
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(-1.0, 0.0, 0.0),
    );
    let fit = fit_arc(&a, &b, &c);
    println!(
        "circle: tangent {:?}, radius {:?}, angle {:.1}°",
        fit.tangent.as_slice(),
        fit.radius,
        fit.theta.to_degrees()
    );

    // collinear points fall back to the chord
    let tangent = fit_arc_tangent(&Vec3::zeros(), &Vec3::x(), &(Vec3::x() * 2.0));
    println!("collinear: tangent {:?}", tangent.as_slice());

    // sharper turns shorten the tangent through max(sin θ, floor)
    let params = TangentParams::default();
    for deg in [180.0f64, 150.0, 120.0, 90.0, 45.0] {
        let half = (deg.to_radians() / 2.0).sin_cos();
        let pts = [
            Vec3::new(-half.0, -half.1, 0.0),
            Vec3::zeros(),
            Vec3::new(half.0, -half.1, 0.0),
        ];
        let (m, _) = chain_tangents(&pts, false, &params);
        println!("angle {deg:5.1}°: middle tangent length {:.4}", m[1].norm());
    }

    // a point close to its neighbour: the cap keeps the short segment from
    // doubling back
    let pts = [
        Vec3::new(-1.0, -1.0, 0.0),
        Vec3::zeros(),
        Vec3::new(0.01, 0.005, 0.0),
        Vec3::new(1.0, 1.2, 0.0),
    ];
    for ratio in [Some(2.0), None] {
        let params = TangentParams {
            chord_ratio: ratio,
            ..TangentParams::default()
        };
        let (m, _) = chain_tangents(&pts, false, &params);
        let seg = HermiteSegment::new(pts[1], pts[2], m[1], m[2]);
        let reverses = (0..=100).any(|j| seg.derivative(j as f64 / 100.0).dot(&seg.chord()) < 0.0);
        println!(
            "chord ratio {ratio:?}: |m| / chord {:.2}, reverses {reverses}",
            m[1].norm() / seg.chord().norm()
        );
    }
}
