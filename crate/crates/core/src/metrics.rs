//! Accuracy, smoothness and storage measurements.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rayon::prelude::*;

use crate::curvenet::SegmentRef;
use crate::field::{Analytic, GridSpec, ScalarField};
use crate::mcbaseline::marching_cubes;
use crate::mesh::TriangleMesh;
use crate::patch::{MultiSidedPatch, PatchMode, Vec2};
use crate::surface::{Surface, SurfaceOptions};
use crate::{Error, Result, Vec3, FORMAT_VERSION};

pub const DEFAULT_SEED: u64 = 42;
/// Random points per triangle in [`radial_error`], on top of the centroid.
pub const SAMPLES_PER_TRIANGLE: usize = 10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub max: f64,
    pub mean: f64,
    pub rms: f64,
    pub samples: usize,
}

impl ErrorStats {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut max, mut sum, mut sq, mut n) = (0.0f64, 0.0, 0.0, 0usize);
        for v in values {
            max = max.max(v);
            sum += v;
            sq += v * v;
            n += 1;
        }
        if n == 0 {
            return ErrorStats::default();
        }
        ErrorStats {
            max,
            mean: sum / n as f64,
            rms: (sq / n as f64).sqrt(),
            samples: n,
        }
    }
}

/// Distance to the analytic surface at every vertex, every triangle
/// centroid and [`SAMPLES_PER_TRIANGLE`] random points per triangle.
pub fn radial_error(mesh: &TriangleMesh, field: &Analytic, seed: u64) -> Result<ErrorStats> {
    let dist = |p: &Vec3| {
        field
            .distance(p)
            .ok_or_else(|| Error::Unsupported(format!("no exact distance for {field:?}")))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values =
        Vec::with_capacity(mesh.vertices.len() + mesh.triangles.len() * (SAMPLES_PER_TRIANGLE + 1));
    for v in &mesh.vertices {
        values.push(dist(v)?);
    }
    for t in 0..mesh.triangles.len() {
        let [a, b, c] = mesh.triangle(t);
        values.push(dist(&((a + b + c) / 3.0))?);
        for _ in 0..SAMPLES_PER_TRIANGLE {
            let (mut r, mut s): (f64, f64) = (rng.gen(), rng.gen());
            if r + s > 1.0 {
                (r, s) = (1.0 - r, 1.0 - s);
            }
            values.push(dist(&(a + (b - a) * r + (c - a) * s))?);
        }
    }
    Ok(ErrorStats::from_values(values))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuitySettings {
    /// Samples along each shared curve.
    pub samples: usize,
    /// Footprint distance from the boundary at which normals are taken.
    pub offset: f64,
    /// Curve parameter margin kept clear of the loop corners.
    pub corner_margin: f64,
    /// Central difference step in footprint units.
    pub step: f64,
}

impl Default for ContinuitySettings {
    fn default() -> Self {
        ContinuitySettings {
            samples: 20,
            offset: 1e-4,
            corner_margin: 0.05,
            step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryContinuity {
    pub segment: SegmentRef,
    pub cells: [[usize; 3]; 2],
    pub max_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo_deg: f64,
    pub hi_deg: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub boundaries: Vec<BoundaryContinuity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuitySummary {
    pub boundaries: usize,
    /// `null` when no curve is shared by two patches.
    pub max_deg: Option<f64>,
    pub mean_deg: Option<f64>,
    /// Counts of per-boundary maxima.
    pub histogram: Vec<HistogramBin>,
}

const HISTOGRAM_EDGES: [f64; 11] = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 45.0, 90.0, 180.0];

impl ContinuityReport {
    pub fn max_deg(&self) -> Option<f64> {
        self.boundaries.iter().map(|b| b.max_deg).reduce(f64::max)
    }

    pub fn mean_deg(&self) -> Option<f64> {
        let n = self.boundaries.len();
        (n > 0).then(|| self.boundaries.iter().map(|b| b.max_deg).sum::<f64>() / n as f64)
    }

    pub fn histogram(&self) -> Vec<HistogramBin> {
        let last = HISTOGRAM_EDGES.len() - 2;
        HISTOGRAM_EDGES
            .windows(2)
            .enumerate()
            .map(|(i, w)| HistogramBin {
                lo_deg: w[0],
                hi_deg: w[1],
                count: self
                    .boundaries
                    .iter()
                    .filter(|b| {
                        b.max_deg >= w[0] && (b.max_deg < w[1] || (i == last && b.max_deg <= w[1]))
                    })
                    .count(),
            })
            .collect()
    }

    pub fn summary(&self) -> ContinuitySummary {
        ContinuitySummary {
            boundaries: self.boundaries.len(),
            max_deg: self.max_deg(),
            mean_deg: self.mean_deg(),
            histogram: self.histogram(),
        }
    }
}

/// Unit normal by central differences at `u`, oriented by the footprint's
/// counter-clockwise frame `(e, n)`.
pub fn fd_normal(patch: &MultiSidedPatch, u: &Vec2, e: &Vec2, n: &Vec2, h: f64) -> Result<Vec3> {
    let f = |v: Vec2| patch.eval(&v);
    let fe = (f(u + e * h)? - f(u - e * h)?) / (2.0 * h);
    let fn_ = (f(u + n * h)? - f(u - n * h)?) / (2.0 * h);
    Ok(fe.cross(&fn_).normalize())
}

/// Normal of `patch` next to side `side` at curve parameter `t`.
fn side_normal(
    patch: &MultiSidedPatch,
    side: usize,
    t: f64,
    s: &ContinuitySettings,
) -> Result<Vec3> {
    let fp = patch.footprint;
    let n = fp.inward(side);
    let e = Vec2::new(n.y, -n.x);
    let u = fp.side_point(side, t) + n * s.offset;
    fd_normal(patch, &u, &e, &n, s.step)
}

pub fn angle_deg(a: &Vec3, b: &Vec3) -> f64 {
    a.dot(b).clamp(-1.0, 1.0).acos().to_degrees()
}

/// Normal deviation across every curve shared by two patches.
pub fn continuity_report(
    patches: &[MultiSidedPatch],
    settings: &ContinuitySettings,
) -> Result<ContinuityReport> {
    let mut sharing: BTreeMap<SegmentRef, Vec<(usize, usize)>> = BTreeMap::new();
    for (p, patch) in patches.iter().enumerate() {
        for (i, c) in patch.curves.iter().enumerate() {
            sharing.entry(c.segment).or_default().push((p, i));
        }
    }
    let pairs: Vec<_> = sharing
        .into_iter()
        .filter_map(|(seg, users)| match users[..] {
            [a, b] => Some((seg, a, b)),
            _ => None,
        })
        .collect();
    let n = settings.samples.max(2);
    let boundaries = pairs
        .par_iter()
        .map(|&(segment, (pa, ia), (pb, ib))| {
            let (a, b) = (&patches[pa], &patches[pb]);
            let same_way = a.curves[ia].reversed == b.curves[ib].reversed;
            let mut max_deg = 0.0f64;
            for j in 0..n {
                let m = settings.corner_margin;
                let t = m + (1.0 - 2.0 * m) * j as f64 / (n - 1) as f64;
                let tb = if same_way { t } else { 1.0 - t };
                let na = side_normal(a, ia, t, settings)?;
                let nb = side_normal(b, ib, tb, settings)?;
                max_deg = max_deg.max(angle_deg(&na, &nb));
            }
            Ok(BoundaryContinuity {
                segment,
                cells: [a.cell, b.cell],
                max_deg,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ContinuityReport { boundaries })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BinaryBound {
    pub surface_bytes: usize,
    pub mc_mesh_bytes: usize,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StorageReport {
    pub curve_network_bytes: usize,
    pub patch_descriptor_bytes: usize,
    pub mc_mesh_bytes: usize,
    /// Surface bytes over mesh bytes; below 1 means the surface is smaller.
    pub ratio: Option<f64>,
    /// Packed binary sizes of the same content.
    pub binary: BinaryBound,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// JSON artifacts against the OBJ encoding of `mesh`.
///
/// The binary bound counts a control point as a packed edge index and an
/// `f32` parameter, a chain point as an index and two in-plane `f32`
/// tangent components, and a patch as a packed cell index, a side count and
/// its vertex indices. Mesh vertices are six `f32` and triangles three `u32`.
pub fn storage_report(surface: &Surface, mesh: &TriangleMesh) -> Result<StorageReport> {
    if surface.patches.is_empty() && mesh.is_empty() {
        return Ok(StorageReport::default());
    }
    let curve_network_bytes = surface.network_json()?.len();
    let patch_descriptor_bytes = surface.patch_json()?.len();
    let mc_mesh_bytes = mesh.to_obj().len();

    let net = &surface.network;
    let chain_points: usize = net.chains.iter().map(|c| c.points.len()).sum();
    let surface_bin = net.points.len() * 8
        + chain_points * 12
        + net.chains.len() * 8
        + surface.patches.iter().map(|p| 5 + 4 * p.k()).sum::<usize>();
    let mesh_bin = mesh.vertices.len() * 24 + mesh.triangles.len() * 12;
    Ok(StorageReport {
        curve_network_bytes,
        patch_descriptor_bytes,
        mc_mesh_bytes,
        ratio: ratio(curve_network_bytes + patch_descriptor_bytes, mc_mesh_bytes),
        binary: BinaryBound {
            surface_bytes: surface_bin,
            mc_mesh_bytes: mesh_bin,
            ratio: ratio(surface_bin, mesh_bin),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshSummary {
    pub vertices: usize,
    pub triangles: usize,
    /// `null` for fields without an exact distance.
    pub radial_error: Option<ErrorStats>,
}

impl MeshSummary {
    pub fn of(mesh: &TriangleMesh, field: Option<&Analytic>, seed: u64) -> Result<Self> {
        let radial_error = match field.map(|f| radial_error(mesh, f, seed)) {
            Some(Ok(e)) => Some(e),
            None | Some(Err(Error::Unsupported(_))) => None,
            Some(Err(e)) => return Err(e),
        };
        Ok(MeshSummary {
            vertices: mesh.vertices.len(),
            triangles: mesh.triangles.len(),
            radial_error,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mesh: MeshSummary,
    pub continuity: ContinuitySummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchSummary {
    pub count: usize,
    /// Patch count per side count.
    pub by_sides: BTreeMap<usize, usize>,
    pub diagnostics: usize,
}

impl PatchSummary {
    pub fn of(surface: &Surface) -> Self {
        let mut by_sides = BTreeMap::new();
        for p in &surface.patches {
            *by_sides.entry(p.k()).or_insert(0) += 1;
        }
        PatchSummary {
            count: surface.patches.len(),
            by_sides,
            diagnostics: surface.diagnostics.len(),
        }
    }
}

/// Marching cubes against the G0 and G1 patch surfaces of one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    #[serde(rename = "ms-version")]
    pub version: u32,
    /// The analytic field, `null` for sampled volumes.
    pub analytic: Option<Analytic>,
    pub grid: GridSpec,
    pub iso: f64,
    pub level: usize,
    pub seed: u64,
    pub patches: PatchSummary,
    pub mc: MeshSummary,
    pub g0: ModeSummary,
    pub g1: ModeSummary,
    /// Artifacts written in G1 mode against the marching cubes OBJ.
    pub storage: StorageReport,
}

pub fn compare(
    field: &ScalarField,
    iso: f64,
    opts: &SurfaceOptions,
    level: usize,
    seed: u64,
) -> Result<CompareReport> {
    let analytic = field.analytic().copied();
    let surface = Surface::extract(field, iso, &opts.with_patch_mode(PatchMode::G1))?;
    let mc = marching_cubes(field, iso);
    let mode = |m: PatchMode| -> Result<ModeSummary> {
        let s = surface.with_mode(m);
        Ok(ModeSummary {
            mesh: MeshSummary::of(&s.tessellate(level)?, analytic.as_ref(), seed)?,
            continuity: continuity_report(&s.patches, &ContinuitySettings::default())?.summary(),
        })
    };
    Ok(CompareReport {
        version: FORMAT_VERSION,
        analytic,
        grid: *field.spec(),
        iso,
        level,
        seed,
        patches: PatchSummary::of(&surface),
        mc: MeshSummary::of(&mc, analytic.as_ref(), seed)?,
        g0: mode(PatchMode::G0)?,
        g1: mode(PatchMode::G1)?,
        storage: storage_report(&surface, &mc)?,
    })
}
