//! Randomised invariants of the whole pipeline.

use std::collections::BTreeSet;

use marching_surfaces::prelude::*;
use proptest::prelude::*;

fn bits(v: &Vec3) -> [u64; 3] {
    [v.x.to_bits(), v.y.to_bits(), v.z.to_bits()]
}

fn sphere_field(n: usize, radius: f64, center: [f64; 3]) -> ScalarField {
    let grid = GridSpec::spanning([n; 3], -3.0, 3.0).unwrap();
    make_analytic("sphere", &[radius, center[0], center[1], center[2]], grid).unwrap()
}

fn affine_field(n: usize, normal: Vec3, offset: f64) -> ScalarField {
    let grid = GridSpec::spanning([n; 3], -1.0, 1.0).unwrap();
    let samples = grid
        .points()
        .map(|p| normal.dot(&grid.world(p)) + offset)
        .collect();
    ScalarField::from_samples(grid, samples).unwrap()
}

fn center() -> impl Strategy<Value = [f64; 3]> {
    [-0.8..0.8f64, -0.8..0.8f64, -0.8..0.8f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spheres_tessellate_closed(n in 6usize..16, radius in 0.7..2.0f64, c in center()) {
        let field = sphere_field(n, radius, c);
        let s = Surface::extract(&field, 0.0, &SurfaceOptions::default()).unwrap();
        prop_assume!(s.diagnostics.is_empty());
        let mc = marching_cubes(&field, 0.0);
        prop_assert!(mc.boundary_edges().is_empty());
        for mode in [PatchMode::G0, PatchMode::G1] {
            let mesh = s.with_mode(mode).tessellate(3).unwrap();
            prop_assert!(mesh.boundary_edges().is_empty(), "{:?}", mode);
        }
    }

    #[test]
    fn mc_vertices_are_control_points(n in 6usize..16, radius in 0.7..2.0f64, c in center()) {
        let field = sphere_field(n, radius, c);
        let net = CurveNetwork::build(&field, 0.0, TangentParams::default()).unwrap();
        let mc = marching_cubes(&field, 0.0);
        let points: BTreeSet<[u64; 3]> = net.points.iter().map(|p| bits(&p.position)).collect();
        let vertices: BTreeSet<[u64; 3]> = mc.vertices.iter().map(bits).collect();
        prop_assert_eq!(vertices, points);
    }

    #[test]
    fn affine_fields_give_planar_patches(
        n in 4usize..9,
        dir in [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64],
        offset in -0.5..0.5f64,
    ) {
        let normal = Vec3::from(dir);
        prop_assume!(normal.norm() > 0.2);
        let unit = normal.normalize();
        let field = affine_field(n, normal, offset);
        let s = Surface::extract(&field, 0.0, &SurfaceOptions::default()).unwrap();
        prop_assume!(!s.patches.is_empty());
        for mode in [PatchMode::G0, PatchMode::G1] {
            let mesh = s.with_mode(mode).tessellate(3).unwrap();
            for v in &mesh.vertices {
                let height = unit.dot(v) + offset / normal.norm();
                prop_assert!(height.abs() < 1e-9, "{:?} off the plane by {}", mode, height);
            }
        }
    }

    #[test]
    fn documents_round_trip(n in 6usize..14, radius in 0.7..2.0f64, c in center()) {
        let field = sphere_field(n, radius, c);
        let s = Surface::extract(&field, 0.0, &SurfaceOptions::default()).unwrap();
        let (net, patches) = (s.network_json().unwrap(), s.patch_json().unwrap());
        let back = Surface::from_json(&net, &patches).unwrap();
        prop_assert_eq!(&back.patches, &s.patches);
        prop_assert_eq!(back.network_json().unwrap(), net);
        prop_assert_eq!(back.patch_json().unwrap(), patches);
    }

    #[test]
    fn extraction_is_deterministic(n in 6usize..14, radius in 0.7..2.0f64, c in center()) {
        let field = sphere_field(n, radius, c);
        let a = Surface::extract(&field, 0.0, &SurfaceOptions::default()).unwrap();
        let b = Surface::extract(&field, 0.0, &SurfaceOptions::default()).unwrap();
        prop_assert_eq!(a.network_json().unwrap(), b.network_json().unwrap());
        prop_assert_eq!(a.patch_json().unwrap(), b.patch_json().unwrap());
        prop_assert_eq!(a.tessellate(2).unwrap(), b.tessellate(2).unwrap());
    }
}
