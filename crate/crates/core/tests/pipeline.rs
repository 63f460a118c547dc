//! End-to-end runs of the library pipeline.

use marching_surfaces::field::{load_raw, write_raw, RawDtype, RawHeader};
use marching_surfaces::metrics::{compare, continuity_report, ContinuitySettings, DEFAULT_SEED};
use marching_surfaces::prelude::*;

fn sphere() -> ScalarField {
    let grid = GridSpec::new([7, 7, 7], [-3.0; 3], [1.0; 3]).unwrap();
    make_analytic("sphere", &[1.0], grid).unwrap()
}

fn blend(n: usize) -> ScalarField {
    let grid = GridSpec::spanning([n, n, n], -3.0, 3.0).unwrap();
    make_analytic("blend", &[], grid).unwrap()
}

fn centroid(mesh: &TriangleMesh, t: usize) -> Vec3 {
    mesh.triangle(t).iter().sum::<Vec3>() / 3.0
}

#[test]
fn blend_documents_reload_bitwise() {
    let s = Surface::extract(&blend(24), 0.0, &SurfaceOptions::default()).unwrap();
    let (net, patches) = (s.network_json().unwrap(), s.patch_json().unwrap());
    let back = Surface::from_json(&net, &patches).unwrap();
    assert_eq!(back.network_json().unwrap(), net);
    assert_eq!(back.patch_json().unwrap(), patches);
    assert_eq!(back.patches, s.patches);
    assert_eq!(back.tessellate(3).unwrap(), s.tessellate(3).unwrap());
}

#[test]
fn sphere_tessellation_is_closed_and_oriented_like_mc() {
    // the field is negative in the ball, so the ball is Outside and faces
    // point toward the centre
    let field = sphere();
    let mc = marching_cubes(&field, 0.0);
    assert!(mc.boundary_edges().is_empty());
    for t in 0..mc.triangles.len() {
        assert!(mc.face_normal(t).dot(&centroid(&mc, t)) < 0.0);
    }
    for mode in [PatchMode::G0, PatchMode::G1] {
        let s = Surface::extract(&field, 0.0, &SurfaceOptions::with_mode(mode)).unwrap();
        let mesh = s.tessellate(6).unwrap();
        assert!(mesh.boundary_edges().is_empty(), "{mode:?}");
        for t in 0..mesh.triangles.len() {
            assert!(
                mesh.face_normal(t).dot(&centroid(&mesh, t)) < 0.0,
                "{mode:?} triangle {t}"
            );
        }
        for (v, n) in mesh.vertices.iter().zip(&mesh.normals) {
            assert!(n.dot(v) < 0.0);
        }
    }
}

#[test]
fn blend_tessellation_is_open_only_at_the_box() {
    let s = Surface::extract(&blend(24), 0.0, &SurfaceOptions::default()).unwrap();
    assert!(s.diagnostics.is_empty());
    let mesh = s.tessellate(2).unwrap();
    let on_box = |p: &Vec3| p.iter().any(|c| (c.abs() - 3.0).abs() < 1e-9);
    for [a, b] in mesh.boundary_edges() {
        let (pa, pb) = (mesh.vertices[a as usize], mesh.vertices[b as usize]);
        assert!(
            on_box(&pa) && on_box(&pb),
            "interior boundary edge {pa:?} {pb:?}"
        );
    }
}

#[test]
fn blend_g1_is_smooth_across_boundaries() {
    for n in [16, 20, 24, 28, 32, 40] {
        let s = Surface::extract(&blend(n), 0.0, &SurfaceOptions::default()).unwrap();
        let report = continuity_report(&s.patches, &ContinuitySettings::default()).unwrap();
        assert!(report.boundaries.len() > 100);
        let mut angles: Vec<f64> = report.boundaries.iter().map(|b| b.max_deg).collect();
        angles.sort_by(f64::total_cmp);
        let (median, max) = (angles[angles.len() / 2], angles[angles.len() - 1]);
        // sliver loops next to grid points are the worst case, 0.26° at 20³
        assert!(max < 1.0, "{n}³: max {max}");
        assert!(median < 1e-3, "{n}³: median {median}");
    }
}

#[test]
fn uncapped_tangents_fold_next_to_grid_points() {
    let mut opts = SurfaceOptions::default();
    opts.tangent.chord_ratio = None;
    let s = Surface::extract(&blend(40), 0.0, &opts).unwrap();
    let max = continuity_report(&s.patches, &ContinuitySettings::default())
        .unwrap()
        .max_deg()
        .unwrap();
    assert!(max > 45.0, "{max}");
}

#[test]
fn g0_and_g1_errors_shrink_with_the_grid() {
    let analytic = marching_surfaces::field::Analytic::from_name("sphere", &[1.3]).unwrap();
    let error = |n: usize, mode: PatchMode| {
        let field = make_analytic(
            "sphere",
            &[1.3],
            GridSpec::spanning([n; 3], -3.0, 3.0).unwrap(),
        )
        .unwrap();
        let s = Surface::extract(&field, 0.0, &SurfaceOptions::with_mode(mode)).unwrap();
        marching_surfaces::metrics::radial_error(&s.tessellate(6).unwrap(), &analytic, DEFAULT_SEED)
            .unwrap()
            .max
    };
    for mode in [PatchMode::G0, PatchMode::G1] {
        let (coarse, fine) = (error(9, mode), error(25, mode));
        assert!(fine < coarse / 4.0, "{mode:?}: {coarse} -> {fine}");
    }
}

#[test]
fn uint8_volume_round_trips() {
    let tmp = tempfile::TempDir::new().unwrap();
    let grid = GridSpec::new([12, 10, 8], [-1.0, -2.0, 0.5], [0.25, 0.5, 0.4]).unwrap();
    let samples = grid
        .points()
        .map(|p| {
            ((grid.world(p) - Vec3::new(0.3, -0.2, 2.0)).norm() * 60.0)
                .round()
                .min(255.0)
        })
        .collect();
    let field = ScalarField::from_samples(grid, samples).unwrap();
    let path = tmp.path().join("ball.raw");
    let header = write_raw(&field, &path, RawDtype::Uint8).unwrap();
    assert_eq!(
        RawHeader::read(&RawHeader::sidecar_path(&path)).unwrap(),
        header
    );
    let back = load_raw(&path, &header).unwrap();
    assert_eq!(back.samples(), field.samples());
    // Inside is at or above the iso, so the ball is the Outside region here
    let a = Surface::extract(&field, 45.5, &SurfaceOptions::default()).unwrap();
    let b = Surface::extract(&back, 45.5, &SurfaceOptions::default()).unwrap();
    assert!(!a.patches.is_empty());
    assert_eq!(a.network_json().unwrap(), b.network_json().unwrap());
    assert_eq!(a.patch_json().unwrap(), b.patch_json().unwrap());
}

#[test]
fn compare_without_distance_has_null_errors() {
    let field = blend(12);
    let sampled = ScalarField::from_samples(*field.spec(), field.samples().to_vec()).unwrap();
    let report = compare(&sampled, 0.0, &SurfaceOptions::default(), 2, DEFAULT_SEED).unwrap();
    let v = serde_json::to_value(&report).unwrap();
    assert!(v["analytic"].is_null());
    for mode in ["mc", "g0", "g1"] {
        let mesh = if mode == "mc" {
            &v["mc"]
        } else {
            &v[mode]["mesh"]
        };
        assert!(mesh["radial_error"].is_null(), "{mode}");
        assert!(mesh["triangles"].as_u64().unwrap() > 0);
    }
    assert!(report.patches.count > 0);
}
