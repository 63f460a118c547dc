//! Acceptance suite. Prints one PASS/FAIL line per criterion with its
//! runtime against the budget, and exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use marching_surfaces::curvenet::SegmentRef;
use marching_surfaces::field::Analytic;
use marching_surfaces::metrics::{
    continuity_report, radial_error, storage_report, ContinuitySettings, DEFAULT_SEED,
};
use marching_surfaces::patch::{weights, Footprint, Vec2};
use marching_surfaces::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coarse_sphere() -> ScalarField {
    let grid = GridSpec::new([7, 7, 7], [-3.0; 3], [1.0; 3]).unwrap();
    make_analytic("sphere", &[1.0], grid).unwrap()
}

fn blend_32() -> ScalarField {
    let grid = GridSpec::spanning([32, 32, 32], -3.0, 3.0).unwrap();
    make_analytic("blend", &[], grid).unwrap()
}

fn extract(field: &ScalarField, mode: PatchMode) -> Surface {
    Surface::extract(field, 0.0, &SurfaceOptions::with_mode(mode)).unwrap()
}

fn sphere_patch_count() -> Outcome {
    let field = coarse_sphere();
    let signs = classify(&field, 0.0);
    let net = CurveNetwork::build_with_signs(&field, &signs, TangentParams::default());
    let loops = LoopSet::build(&net, &signs).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = loops.loops().map(|l| l.len()).collect();
    ensure(sizes.len() == 8 && sizes.iter().all(|&k| k == 3), || {
        format!("loop sizes {sizes:?}")
    })?;
    let mc = marching_cubes(&field, 0.0);
    ensure(mc.triangles.len() == 8, || {
        format!("{} MC triangles", mc.triangles.len())
    })?;
    Ok("8 three-sided loops, 8 MC triangles".into())
}

fn boundary_interpolation() -> Outcome {
    const SAMPLES: usize = 100;
    let mut worst = 0.0f64;
    let mut samples = 0;
    for (name, field) in [("sphere", coarse_sphere()), ("blend", blend_32())] {
        let base = extract(&field, PatchMode::G1);
        for mode in [PatchMode::G0, PatchMode::G1] {
            let s = base.with_mode(mode);
            for p in &s.patches {
                for i in 0..p.k() {
                    for j in 0..SAMPLES {
                        let t = j as f64 / (SAMPLES - 1) as f64;
                        let got = p
                            .eval(&p.footprint.side_point(i, t))
                            .map_err(|e| e.to_string())?;
                        let d = (got - p.curves[i].eval(t)).norm();
                        worst = worst.max(d);
                        samples += 1;
                        ensure(d < 1e-9, || {
                            format!("{name} {mode:?} cell {:?} side {i} t {t}: {d:e}", p.cell)
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{samples} boundary samples over G0 and G1, max deviation {worst:.2e}"
    ))
}

fn partition_of_unity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst = 0.0f64;
    for k in 3..=6 {
        let fp = Footprint::regular(k).map_err(|e| e.to_string())?;
        let mut n = 0;
        while n < 1000 {
            let u = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if !fp.contains(&u) {
                continue;
            }
            let frames = fp.side_frames(&u).map_err(|e| e.to_string())?;
            if frames.iter().any(|f| f.d <= 0.0) {
                continue;
            }
            let w = weights(&frames);
            let sum: f64 = w.iter().sum();
            let sq: f64 = w.iter().map(|x| x * x).sum();
            let renorm: f64 = w.iter().map(|x| x * x / sq).sum();
            worst = worst.max((sum - 1.0).abs()).max((renorm - 1.0).abs());
            ensure(
                (sum - 1.0).abs() < 1e-12 && (renorm - 1.0).abs() < 1e-12,
                || format!("k {k} at {u:?}: sums {sum} and {renorm}"),
            )?;
            n += 1;
        }
    }
    Ok(format!("4000 points, max |sum - 1| {worst:.2e}"))
}

fn c1_curve_network() -> Outcome {
    let mut checked = 0;
    for field in [coarse_sphere(), blend_32()] {
        let net = CurveNetwork::build(&field, 0.0, TangentParams::default())
            .map_err(|e| e.to_string())?;
        for (c, chain) in net.chains.iter().enumerate() {
            let n = chain.points.len();
            let interior: Vec<usize> = if chain.closed {
                (0..n).collect()
            } else {
                (1..n - 1).collect()
            };
            for k in interior {
                let prev = (k + n - 1) % n;
                let seg = |index: usize| {
                    net.segment(SegmentRef {
                        chain: c as u32,
                        index: index as u32,
                    })
                };
                let (a, b) = (seg(prev), seg(k));
                ensure(a.m1 == b.m0 && a.m1 == chain.tangents[k], || {
                    format!("chain {c} point {k}: {:?} vs {:?}", a.m1, b.m0)
                })?;
                ensure(a.derivative(1.0) == b.derivative(0.0), || {
                    format!("chain {c} point {k}: derivatives differ")
                })?;
                ensure(a.p1 == b.p0, || {
                    format!("chain {c} point {k}: positions differ")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} interior control points share identical tangents"
    ))
}

fn circular_arcs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst = 0.0f64;
    for n in 0..100 {
        let center = Vec3::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
        );
        let radius = rng.gen_range(0.1..10.0);
        let normal = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
        .normalize();
        let e1 = normal.cross(&Vec3::new(0.3, -0.7, 0.5)).normalize();
        let e2 = normal.cross(&e1);
        let mut angles: Vec<f64> = (0..3)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(f64::total_cmp);
        if angles.windows(2).any(|w| w[1] - w[0] < 0.05) {
            angles = vec![angles[0], angles[0] + 0.7, angles[0] + 2.1];
        }
        let p = angles
            .iter()
            .map(|a| center + (e1 * a.cos() + e2 * a.sin()) * radius)
            .collect::<Vec<_>>();
        let t = fit_arc_tangent(&p[0], &p[1], &p[2]);
        let dev = t.dot(&(p[1] - center)).abs() / radius;
        worst = worst.max(dev);
        ensure(dev < 1e-9 && (t.norm() - 1.0).abs() < 1e-12, || {
            format!("circle {n}: |t . r| {dev:e}")
        })?;
    }
    let (a, b, c) = (
        Vec3::new(1.0, 2.0, 3.0),
        Vec3::new(2.0, 3.0, 4.0),
        Vec3::new(4.0, 5.0, 6.0),
    );
    let chord = (c - a).normalize();
    let t = fit_arc_tangent(&a, &b, &c);
    ensure((t - chord).norm() < 1e-12, || {
        format!("collinear tangent {t:?}, chord {chord:?}")
    })?;
    Ok(format!(
        "100 circles, max |t . r| / R {worst:.2e}; collinear gives the chord"
    ))
}

fn g1_continuity() -> Outcome {
    let base = extract(&coarse_sphere(), PatchMode::G1);
    let settings = ContinuitySettings::default();
    let max = |mode| {
        continuity_report(&base.with_mode(mode).patches, &settings)
            .map(|r| (r.boundaries.len(), r.max_deg()))
    };
    let (n1, g1) = max(PatchMode::G1).map_err(|e| e.to_string())?;
    let (n0, g0) = max(PatchMode::G0).map_err(|e| e.to_string())?;
    let (g0, g1) = (g0.unwrap_or(0.0), g1.unwrap_or(f64::INFINITY));
    ensure(n1 == 12 && n0 == 12, || {
        format!("{n0} / {n1} shared boundaries, expected 12")
    })?;
    ensure(g1 < 1.0, || format!("G1 max {g1}°"))?;
    ensure(g0 > g1, || {
        format!("G0 max {g0}° does not exceed G1 max {g1}°")
    })?;
    ensure(g0 > 45.0, || format!("G0 max {g0}° below the frozen 45°"))?;
    Ok(format!("12 boundaries: G1 max {g1:.2e}°, G0 max {g0:.2}°"))
}

fn accuracy_ordering() -> Outcome {
    let field = coarse_sphere();
    let unit = Analytic::from_name("sphere", &[1.0]).unwrap();
    let base = extract(&field, PatchMode::G1);
    let err = |mesh: &TriangleMesh| {
        radial_error(mesh, &unit, DEFAULT_SEED)
            .map(|e| e.max)
            .map_err(|e| e.to_string())
    };
    let mc = err(&marching_cubes(&field, 0.0))?;
    let g0 = err(&base
        .with_mode(PatchMode::G0)
        .tessellate(8)
        .map_err(|e| e.to_string())?)?;
    let g1 = err(&base.tessellate(8).map_err(|e| e.to_string())?)?;
    let octahedron = 1.0 - 1.0 / 3f64.sqrt();
    ensure((mc - octahedron).abs() < 1e-9, || {
        format!("MC max {mc}, expected {octahedron}")
    })?;
    ensure(g1 <= g0 && g0 < mc, || {
        format!("ordering broken: G1 {g1}, G0 {g0}, MC {mc}")
    })?;
    ensure(g0 < 0.33 && g1 < 0.18, || {
        format!("above frozen thresholds: G0 {g0}, G1 {g1}")
    })?;
    Ok(format!("G1 {g1:.4} <= G0 {g0:.4} < MC {mc:.4}"))
}

fn compression() -> Outcome {
    let field = blend_32();
    let s = extract(&field, PatchMode::G1);
    let r = storage_report(&s, &marching_cubes(&field, 0.0)).map_err(|e| e.to_string())?;
    let ratio = r.ratio.ok_or("empty surface")?;
    let surface = r.curve_network_bytes + r.patch_descriptor_bytes;
    ensure(surface < r.mc_mesh_bytes, || {
        format!(
            "{surface} B vs OBJ {} B (ratio {ratio:.3})",
            r.mc_mesh_bytes
        )
    })?;
    Ok(format!(
        "{} + {} B vs OBJ {} B, ratio {ratio:.3} (binary bound {:.3})",
        r.curve_network_bytes,
        r.patch_descriptor_bytes,
        r.mc_mesh_bytes,
        r.binary.ratio.unwrap_or(f64::NAN)
    ))
}

fn sign_pattern_sweep() -> Outcome {
    let grid = GridSpec::new([2, 2, 2], [0.0; 3], [1.0; 3]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let (mut loops_seen, mut diagnosed) = (0, 0);
    let mut sizes_seen = std::collections::BTreeSet::new();
    for pattern in 0..=255u32 {
        for _ in 0..8 {
            let samples = (0..8)
                .map(|c| {
                    let mag = rng.gen_range(0.05..1.0);
                    if pattern & (1 << c) != 0 {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect();
            let field = ScalarField::from_samples(grid, samples).unwrap();
            let signs = classify(&field, 0.0);
            let net = CurveNetwork::build_with_signs(&field, &signs, TangentParams::default());
            let set =
                LoopSet::build(&net, &signs).map_err(|e| format!("pattern {pattern}: {e}"))?;
            let curves: usize = set.loops().map(|l| l.len()).sum();
            ensure(curves == net.segment_count(), || {
                format!(
                    "pattern {pattern}: {curves} loop curves for {} segments",
                    net.segment_count()
                )
            })?;
            for l in set.loops() {
                loops_seen += 1;
                sizes_seen.insert(l.len());
                if !l.is_patchable() {
                    ensure(
                        set.diagnostics
                            .iter()
                            .any(|d| d.loop_sizes.contains(&l.len())),
                        || format!("pattern {pattern}: {}-loop without a diagnostic", l.len()),
                    )?;
                    diagnosed += 1;
                }
            }
        }
    }
    Ok(format!(
        "2048 cells, {loops_seen} loops of sizes {sizes_seen:?}, {diagnosed} diagnosed"
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |out: &std::path::Path| {
        let status = Command::new(env!("CARGO_BIN_EXE_marching-surfaces"))
            .args([
                "extract", "--field", "blend", "--iso", "0", "--dims", "32,32,32", "--out",
            ])
            .arg(out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            String::from_utf8_lossy(&status.stderr).into_owned()
        })
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&a)?;
    run(&b)?;
    let mut bytes = 0;
    for name in ["network.json", "patches.json", "diagnostics.jsonl"] {
        let (x, y) = (
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
        );
        ensure(x == y, || format!("{name} differs between runs"))?;
        bytes += x.len();
    }
    Ok(format!("3 artifacts, {bytes} bytes identical"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sphere patch count", 1, sphere_patch_count),
        ("boundary interpolation", 10, boundary_interpolation),
        ("partition of unity", 1, partition_of_unity),
        ("C1 curve network", 1, c1_curve_network),
        ("circular arc tangents", 1, circular_arcs),
        ("G1 continuity", 30, g1_continuity),
        ("accuracy ordering", 30, accuracy_ordering),
        ("compression", 60, compression),
        ("sign pattern sweep", 10, sign_pattern_sweep),
        ("determinism", 5, determinism),
    ];
    let mut failed = 0;
    for (n, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(budget);
        let result = match result {
            Ok(_) if elapsed > budget => Err(format!("over the {budget:?} budget")),
            r => r,
        };
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!(
            "{tag} {:>2} {name:<24} {:>8.3} s / {:>2} s  {detail}",
            n + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
