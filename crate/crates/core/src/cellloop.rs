//! Per-cell boundary loops.
//!
//! The curve segments lying on the six faces of a grid cell are chained into
//! closed loops. Segments on low faces keep their slice orientation and
//! segments on high faces are reversed, which makes every loop run
//! counter-clockwise about the normal pointing away from the Inside region.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::curvenet::{AxialPlane, CurveNetwork, FaceKey, HermiteSegment, SegmentRef};
use crate::field::SignGrid;
use crate::{Error, Result, Vec3};

/// Smallest and largest loop sizes that are filled with a patch.
pub const PATCHABLE_SIDES: std::ops::RangeInclusive<usize> = 3..=6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellFace {
    XLow,
    XHigh,
    YLow,
    YHigh,
    ZLow,
    ZHigh,
}

impl CellFace {
    pub const ALL: [CellFace; 6] = [
        CellFace::XLow,
        CellFace::XHigh,
        CellFace::YLow,
        CellFace::YHigh,
        CellFace::ZLow,
        CellFace::ZHigh,
    ];

    /// Axis the face is perpendicular to.
    pub fn axis(self) -> usize {
        match self {
            CellFace::XLow | CellFace::XHigh => 0,
            CellFace::YLow | CellFace::YHigh => 1,
            CellFace::ZLow | CellFace::ZHigh => 2,
        }
    }

    pub fn is_high(self) -> bool {
        matches!(self, CellFace::XHigh | CellFace::YHigh | CellFace::ZHigh)
    }

    pub fn plane(self) -> AxialPlane {
        AxialPlane::with_normal(self.axis())
    }

    /// The 2D slice cell this face coincides with.
    pub fn face_key(self, cell: [usize; 3]) -> FaceKey {
        let plane = self.plane();
        let [a, b, n] = plane.axes();
        FaceKey {
            plane,
            slice: cell[n] + self.is_high() as usize,
            cell: [cell[a], cell[b]],
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// A network segment seen from one cell, oriented for loop assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceSegment {
    pub face: CellFace,
    pub segment: SegmentRef,
    pub reversed: bool,
    pub from: usize,
    pub to: usize,
}

/// Segments on each face of `cell`, indexed like [`CellFace::ALL`].
pub fn collect_cell_segments(
    net: &CurveNetwork,
    cell: [usize; 3],
) -> [SmallVec<[FaceSegment; 2]>; 6] {
    let mut out: [SmallVec<[FaceSegment; 2]>; 6] = Default::default();
    for face in CellFace::ALL {
        for &r in net.face_segments(&face.face_key(cell)) {
            let (a, b) = net.segment_nodes(r);
            let reversed = face.is_high();
            let (from, to) = if reversed { (b, a) } else { (a, b) };
            out[face.index()].push(FaceSegment {
                face,
                segment: r,
                reversed,
                from,
                to,
            });
        }
    }
    out
}

/// One boundary curve of a loop.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopCurve {
    pub face: CellFace,
    pub segment: SegmentRef,
    /// Whether the loop runs against the chain direction.
    pub reversed: bool,
    pub start: usize,
    pub end: usize,
    /// The segment in chain direction, shared bitwise by both cells.
    pub canonical: HermiteSegment,
    /// The segment in loop direction.
    pub curve: HermiteSegment,
}

impl LoopCurve {
    fn new(net: &CurveNetwork, s: &FaceSegment) -> Self {
        let canonical = net.segment(s.segment);
        let curve = if s.reversed {
            canonical.reversed()
        } else {
            canonical
        };
        LoopCurve {
            face: s.face,
            segment: s.segment,
            reversed: s.reversed,
            start: s.from,
            end: s.to,
            canonical,
            curve,
        }
    }

    pub fn eval(&self, t: f64) -> Vec3 {
        self.curve.eval(t)
    }

    /// Point `j` of `n` uniform samples in loop direction. Evaluated on the
    /// canonical segment so that both cells sharing it get identical bits.
    pub fn eval_sample(&self, j: usize, n: usize) -> Vec3 {
        let idx = if self.reversed { n - j } else { j };
        self.canonical.eval(idx as f64 / n as f64)
    }

    pub fn plane(&self) -> AxialPlane {
        self.face.plane()
    }

    fn flip(&mut self) {
        self.reversed = !self.reversed;
        std::mem::swap(&mut self.start, &mut self.end);
        self.curve = self.curve.reversed();
    }
}

/// The two tangents meeting at a loop vertex, both in loop direction:
/// `incoming` ends the previous curve and `outgoing` starts the next one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerTangents {
    pub incoming: Vec3,
    pub outgoing: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellLoop {
    pub cell: [usize; 3],
    pub curves: Vec<LoopCurve>,
    /// Corner `i` sits at the start of curve `i`.
    pub corners: Vec<CornerTangents>,
    /// Set when the assembled orientation disagreed with the field and the
    /// loop was reversed.
    pub rewound: bool,
}

impl CellLoop {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn is_patchable(&self) -> bool {
        PATCHABLE_SIDES.contains(&self.len())
    }

    /// Control point ids of the loop vertices.
    pub fn nodes(&self) -> Vec<usize> {
        self.curves.iter().map(|c| c.start).collect()
    }

    pub fn vertex(&self, i: usize) -> Vec3 {
        self.curves[i].curve.p0
    }

    /// Newell normal of the polygon through the vertices and curve midpoints.
    pub fn newell_normal(&self) -> Vec3 {
        let pts: Vec<Vec3> = self
            .curves
            .iter()
            .flat_map(|c| [c.curve.p0, c.curve.eval(0.5)])
            .collect();
        let mut n = Vec3::zeros();
        for i in 0..pts.len() {
            n += pts[i].cross(&pts[(i + 1) % pts.len()]);
        }
        n
    }

    pub fn mean_chord(&self) -> f64 {
        self.curves
            .iter()
            .map(|c| c.curve.chord().norm())
            .sum::<f64>()
            / self.len() as f64
    }

    fn reverse(&mut self) {
        self.curves.reverse();
        for c in &mut self.curves {
            c.flip();
        }
    }

    /// Rebuilds a loop from its vertex ids, e.g. when reading descriptors.
    pub fn from_nodes(net: &CurveNetwork, cell: [usize; 3], nodes: &[usize]) -> Result<Self> {
        let faces = collect_cell_segments(net, cell);
        let k = nodes.len();
        let mut curves = Vec::with_capacity(k);
        for i in 0..k {
            let (a, b) = (nodes[i], nodes[(i + 1) % k]);
            let seg = faces
                .iter()
                .flatten()
                .find_map(|s| {
                    if (s.from, s.to) == (a, b) {
                        Some(*s)
                    } else if (s.to, s.from) == (a, b) {
                        Some(FaceSegment {
                            reversed: !s.reversed,
                            from: a,
                            to: b,
                            ..*s
                        })
                    } else {
                        None
                    }
                })
                .ok_or_else(|| {
                    Error::Format(format!(
                        "cell {cell:?} has no curve from point {a} to point {b}"
                    ))
                })?;
            curves.push(LoopCurve::new(net, &seg));
        }
        let mut lp = CellLoop {
            cell,
            curves,
            corners: Vec::new(),
            rewound: false,
        };
        select_vertex_tangents(net, &mut lp)?;
        Ok(lp)
    }
}

/// Chains face segments into closed loops and fixes their winding.
pub fn assemble_loops(
    net: &CurveNetwork,
    cell: [usize; 3],
    faces: &[SmallVec<[FaceSegment; 2]>; 6],
) -> Result<Vec<CellLoop>> {
    let segs: Vec<FaceSegment> = faces.iter().flatten().copied().collect();
    let mut used = vec![false; segs.len()];
    let mut loops = Vec::new();
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let origin = segs[start].from;
        let mut chain = vec![segs[start]];
        let mut at = segs[start].to;
        while at != origin {
            let last_face = chain.last().map(|s| s.face);
            let free = |j: &usize| !used[*j] && segs[*j].from == at;
            let next = (0..segs.len())
                .filter(free)
                .find(|&j| Some(segs[j].face) != last_face)
                .or_else(|| (0..segs.len()).find(free));
            let Some(j) = next else {
                return Err(Error::Topology {
                    cell,
                    reason: format!("boundary chain stops at control point {at}"),
                });
            };
            used[j] = true;
            chain.push(segs[j]);
            at = segs[j].to;
        }
        let mut lp = CellLoop {
            cell,
            curves: chain.iter().map(|s| LoopCurve::new(net, s)).collect(),
            corners: Vec::new(),
            rewound: false,
        };
        let descent: Vec3 = lp.curves.iter().map(|c| net.points[c.start].descent).sum();
        if lp.newell_normal().dot(&descent) < 0.0 {
            lp.reverse();
            lp.rewound = true;
        }
        select_vertex_tangents(net, &mut lp)?;
        loops.push(lp);
    }
    Ok(loops)
}

/// Picks among `candidates` the tangent in `plane` closest in angle to
/// `chord`, flipped to point along it.
pub fn pick_tangent(
    candidates: &[(AxialPlane, Vec3)],
    plane: AxialPlane,
    chord: &Vec3,
) -> Option<Vec3> {
    let dir = chord.normalize();
    candidates
        .iter()
        .filter(|(p, _)| *p == plane)
        .map(|(_, m)| {
            let n = m.norm();
            let cos = if n > 0.0 { m.dot(&dir) / n } else { 0.0 };
            (cos, *m)
        })
        .max_by(|a, b| a.0.abs().total_cmp(&b.0.abs()))
        .map(|(cos, m)| if cos < 0.0 { -m } else { m })
}

/// Resolves the corner tangent pairs of a loop from the tangents stored at
/// its control points.
pub fn select_vertex_tangents(net: &CurveNetwork, lp: &mut CellLoop) -> Result<()> {
    let k = lp.curves.len();
    let mut starts = Vec::with_capacity(k);
    let mut ends = Vec::with_capacity(k);
    for c in &lp.curves {
        let chord = c.curve.chord();
        let plane = c.plane();
        for (node, out) in [(c.start, &mut starts), (c.end, &mut ends)] {
            let m = pick_tangent(&net.point_tangents(node), plane, &chord).ok_or_else(|| {
                Error::Topology {
                    cell: lp.cell,
                    reason: format!("control point {node} has no {} tangent", plane.name()),
                }
            })?;
            out.push(m);
        }
    }
    lp.corners = (0..k)
        .map(|i| CornerTangents {
            incoming: ends[(i + k - 1) % k],
            outgoing: starts[i],
        })
        .collect();
    Ok(())
}

/// Bit `c` is set when corner `c` is Inside. Corners are numbered
/// (0,0,0), (1,0,0), (1,1,0), (0,1,0), then the same at z + 1.
pub fn sign_pattern(signs: &SignGrid, [i, j, k]: [usize; 3]) -> u8 {
    CORNERS
        .iter()
        .enumerate()
        .filter(|(_, d)| signs.sign([i + d[0], j + d[1], k + d[2]]).is_inside())
        .fold(0u8, |acc, (c, _)| acc | (1 << c))
}

pub(crate) const CORNERS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

#[derive(Debug, Clone, PartialEq)]
pub struct CellClassification {
    pub cell: [usize; 3],
    pub pattern: u8,
    pub loops: Vec<CellLoop>,
}

/// One JSON record per line.
pub fn diagnostics_jsonl(diagnostics: &[Diagnostic]) -> Result<String> {
    let mut out = String::new();
    for d in diagnostics {
        out.push_str(&serde_json::to_string(d)?);
        out.push('\n');
    }
    Ok(out)
}

/// A cell whose loops cannot all be patched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub cell: [usize; 3],
    pub pattern: u8,
    pub loop_sizes: Vec<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoopSet {
    pub cells: Vec<CellClassification>,
    pub diagnostics: Vec<Diagnostic>,
}

impl LoopSet {
    /// Assembles the loops of every cell touched by the network.
    pub fn build(net: &CurveNetwork, signs: &SignGrid) -> Result<Self> {
        let ncell = net.grid.cells();
        let mut touched = BTreeSet::new();
        for key in net.faces() {
            let [a, b, n] = key.plane.axes();
            let mut cell = [0; 3];
            cell[a] = key.cell[0];
            cell[b] = key.cell[1];
            for s in [Some(key.slice), key.slice.checked_sub(1)]
                .into_iter()
                .flatten()
            {
                if s < ncell[n] {
                    cell[n] = s;
                    touched.insert(cell);
                }
            }
        }
        let touched: Vec<[usize; 3]> = touched.into_iter().collect();
        let cells = touched
            .par_iter()
            .map(|&cell| {
                let faces = collect_cell_segments(net, cell);
                Ok(CellClassification {
                    cell,
                    pattern: sign_pattern(signs, cell),
                    loops: assemble_loops(net, cell, &faces)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let diagnostics = cells.iter().filter_map(diagnose).collect();
        Ok(LoopSet { cells, diagnostics })
    }

    pub fn loops(&self) -> impl Iterator<Item = &CellLoop> {
        self.cells.iter().flat_map(|c| c.loops.iter())
    }

    pub fn patchable(&self) -> impl Iterator<Item = &CellLoop> {
        self.loops().filter(|l| l.is_patchable())
    }

    /// Diagnostics as JSON lines.
    pub fn diagnostics_jsonl(&self) -> Result<String> {
        diagnostics_jsonl(&self.diagnostics)
    }
}

fn diagnose(c: &CellClassification) -> Option<Diagnostic> {
    let sizes: Vec<usize> = c.loops.iter().map(|l| l.len()).collect();
    let mut reasons = Vec::new();
    if sizes.iter().any(|k| !PATCHABLE_SIDES.contains(k)) {
        reasons.push("loop size outside 3..=6, not patched");
    }
    if c.loops.iter().any(|l| l.rewound) {
        reasons.push("loop winding reversed to match the field");
    }
    (!reasons.is_empty()).then(|| Diagnostic {
        cell: c.cell,
        pattern: c.pattern,
        loop_sizes: sizes,
        reason: reasons.join("; "),
    })
}
