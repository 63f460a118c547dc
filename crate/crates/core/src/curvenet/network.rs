use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{
    edge_crossing, fit_arc, trace_isolines, AxialPlane, Axis, ControlPoint, EdgeId, HermiteSegment,
    NodeKey,
};
use crate::field::{classify, ScalarField, SignGrid};
use crate::{Result, Vec3};

/// Tangent length rule: `scale · |P(k+1) - P(k-1)| · max(sin θ, floor)`,
/// capped at `chord_ratio` times the shorter adjacent chord.
///
/// Without the cap a point close to its neighbour gets a tangent several
/// times longer than the segment between them, and a cubic Hermite segment
/// whose tangents exceed three times its chord doubles back on itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentParams {
    pub scale: f64,
    pub floor: f64,
    /// `None` leaves the length uncapped.
    pub chord_ratio: Option<f64>,
}

impl Default for TangentParams {
    fn default() -> Self {
        Self {
            scale: 1.0 / 3.0,
            floor: 0.05,
            chord_ratio: Some(2.0),
        }
    }
}

impl TangentParams {
    fn magnitude(&self, span: f64, theta: f64, chord: f64) -> f64 {
        let len = self.scale * span * theta.sin().max(self.floor);
        match self.chord_ratio {
            Some(r) => len.min(r * chord),
            None => len,
        }
    }
}

/// One isoline in one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolineChain {
    pub plane: AxialPlane,
    pub slice: usize,
    /// Control point ids in travel order (Inside on the left).
    pub points: Vec<usize>,
    /// 2D cell of segment `k`, which joins `points[k]` and `points[k + 1]`.
    pub cells: Vec<[usize; 2]>,
    pub closed: bool,
    /// Tangent vector at each point, parallel to `points`.
    pub tangents: Vec<Vec3>,
    /// Set for two-point chains, whose tangents are the chord.
    pub chord_fallback: bool,
}

impl IsolineChain {
    pub fn segment_count(&self) -> usize {
        self.cells.len()
    }

    /// Endpoint ids of segment `k`.
    pub fn segment_nodes(&self, k: usize) -> (usize, usize) {
        let n = self.points.len();
        (self.points[k], self.points[(k + 1) % n])
    }
}

/// Tangents for a chain through `positions`.
///
/// Closed chains take wrap-around triples; open chains use the first and
/// last triple for their end points. Returns the tangents and whether the
/// two-point chord rule was used.
pub fn chain_tangents(
    positions: &[Vec3],
    closed: bool,
    params: &TangentParams,
) -> (Vec<Vec3>, bool) {
    let n = positions.len();
    if n < 2 {
        return (vec![Vec3::zeros(); n], false);
    }
    if n == 2 {
        let chord = positions[1] - positions[0];
        let m = chord.normalize() * (params.scale * chord.norm());
        return (vec![m, m], true);
    }
    let chord = |i: usize, j: usize| (positions[j] - positions[i]).norm();
    let tangent = |i: usize, j: usize, k: usize, shorter: f64| {
        let (a, b, c) = (&positions[i], &positions[j], &positions[k]);
        let fit = fit_arc(a, b, c);
        (fit, params.magnitude(fit.sides[2], fit.theta, shorter))
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let m = if closed {
            let (prev, next) = ((k + n - 1) % n, (k + 1) % n);
            let shorter = chord(prev, k).min(chord(k, next));
            let (fit, len) = tangent(prev, k, next, shorter);
            fit.tangent * len
        } else if k == 0 {
            let (fit, len) = tangent(0, 1, 2, chord(0, 1));
            fit.tangent_at_first(&positions[0], &positions[1]) * len
        } else if k == n - 1 {
            let (fit, len) = tangent(n - 3, n - 2, n - 1, chord(n - 2, n - 1));
            fit.tangent_at_last(&positions[n - 2], &positions[n - 1]) * len
        } else {
            let shorter = chord(k - 1, k).min(chord(k, k + 1));
            let (fit, len) = tangent(k - 1, k, k + 1, shorter);
            fit.tangent * len
        };
        out.push(m);
    }
    (out, false)
}

/// Fills `chain.tangents` from the control point positions.
pub fn assign_tangents(chain: &mut IsolineChain, points: &[ControlPoint], params: &TangentParams) {
    let positions: Vec<Vec3> = chain.points.iter().map(|&p| points[p].position).collect();
    let (tangents, fallback) = chain_tangents(&positions, chain.closed, params);
    chain.tangents = tangents;
    chain.chord_fallback = fallback;
}

/// Reference to segment `index` of chain `chain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SegmentRef {
    pub chain: u32,
    pub index: u32,
}

/// A 2D cell of a slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceKey {
    pub plane: AxialPlane,
    pub slice: usize,
    pub cell: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct CurveNetwork {
    pub grid: crate::field::GridSpec,
    pub iso: f64,
    pub params: TangentParams,
    pub points: Vec<ControlPoint>,
    pub chains: Vec<IsolineChain>,
    faces: HashMap<FaceKey, SmallVec<[SegmentRef; 2]>>,
    /// `(chain, position)` of every chain visit of each control point.
    incidence: Vec<SmallVec<[(u32, u32); 2]>>,
}

impl CurveNetwork {
    pub fn build(field: &ScalarField, iso: f64, params: TangentParams) -> Result<Self> {
        let signs = classify(field, iso);
        Ok(Self::build_with_signs(field, &signs, params))
    }

    pub fn build_with_signs(field: &ScalarField, signs: &SignGrid, params: TangentParams) -> Self {
        let (points, lookup) = control_points(field, signs);
        let grid = *field.spec();
        let slices: Vec<(AxialPlane, usize)> = AxialPlane::ALL
            .into_iter()
            .flat_map(|plane| (0..plane.extent(grid.dims)[2]).map(move |s| (plane, s)))
            .collect();
        let chains: Vec<IsolineChain> = slices
            .par_iter()
            .map(|&(plane, slice)| {
                let mut chains = trace_isolines(field, signs, &lookup, plane, slice);
                for chain in &mut chains {
                    assign_tangents(chain, &points, &params);
                }
                chains
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        Self::from_parts(grid, signs.iso, params, points, chains)
    }

    pub fn from_parts(
        grid: crate::field::GridSpec,
        iso: f64,
        params: TangentParams,
        points: Vec<ControlPoint>,
        chains: Vec<IsolineChain>,
    ) -> Self {
        let mut faces: HashMap<FaceKey, SmallVec<[SegmentRef; 2]>> = HashMap::new();
        let mut incidence = vec![SmallVec::new(); points.len()];
        for (c, chain) in chains.iter().enumerate() {
            for (k, &p) in chain.points.iter().enumerate() {
                incidence[p].push((c as u32, k as u32));
            }
            for (k, &cell) in chain.cells.iter().enumerate() {
                let key = FaceKey {
                    plane: chain.plane,
                    slice: chain.slice,
                    cell,
                };
                faces.entry(key).or_default().push(SegmentRef {
                    chain: c as u32,
                    index: k as u32,
                });
            }
        }
        Self {
            grid,
            iso,
            params,
            points,
            chains,
            faces,
            incidence,
        }
    }

    pub fn chain(&self, r: SegmentRef) -> &IsolineChain {
        &self.chains[r.chain as usize]
    }

    pub fn segment_nodes(&self, r: SegmentRef) -> (usize, usize) {
        self.chain(r).segment_nodes(r.index as usize)
    }

    /// The Hermite curve of a segment in chain orientation.
    pub fn segment(&self, r: SegmentRef) -> HermiteSegment {
        let chain = self.chain(r);
        let k = r.index as usize;
        let k1 = (k + 1) % chain.points.len();
        HermiteSegment::new(
            self.points[chain.points[k]].position,
            self.points[chain.points[k1]].position,
            chain.tangents[k],
            chain.tangents[k1],
        )
    }

    /// Segments lying in one 2D cell of one slice.
    pub fn face_segments(&self, key: &FaceKey) -> &[SegmentRef] {
        self.faces.get(key).map_or(&[], |v| v.as_slice())
    }

    /// Every stored tangent at a control point with the plane it lies in.
    pub fn point_tangents(&self, point: usize) -> SmallVec<[(AxialPlane, Vec3); 2]> {
        self.incidence[point]
            .iter()
            .map(|&(c, k)| {
                let chain = &self.chains[c as usize];
                (chain.plane, chain.tangents[k as usize])
            })
            .collect()
    }

    /// All face keys carrying at least one segment.
    pub fn faces(&self) -> impl Iterator<Item = &FaceKey> {
        self.faces.keys()
    }

    pub fn chains_in(&self, plane: AxialPlane) -> impl Iterator<Item = &IsolineChain> {
        self.chains.iter().filter(move |c| c.plane == plane)
    }

    pub fn segment_count(&self) -> usize {
        self.chains.iter().map(|c| c.segment_count()).sum()
    }
}

/// Crossings grouped into control points, plus the edge lookup used by the
/// slice tracer.
fn control_points(
    field: &ScalarField,
    signs: &SignGrid,
) -> (Vec<ControlPoint>, HashMap<EdgeId, usize>) {
    let mut points: Vec<ControlPoint> = Vec::new();
    let mut by_key: HashMap<NodeKey, usize> = HashMap::new();
    let mut lookup = HashMap::new();
    let dims = field.spec().dims;
    for p in field.spec().points() {
        for axis in Axis::ALL {
            if p[axis.index()] + 1 >= dims[axis.index()] {
                continue;
            }
            let edge = EdgeId::new(p, axis);
            let Some(crossing) = edge_crossing(field, signs, edge) else {
                continue;
            };
            match by_key.get(&crossing.node_key()) {
                Some(&id) => {
                    points[id].push(crossing, signs);
                    lookup.insert(edge, id);
                }
                None => {
                    by_key.insert(crossing.node_key(), points.len());
                    lookup.insert(edge, points.len());
                    points.push(ControlPoint::new(crossing, signs));
                }
            }
        }
    }
    (points, lookup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_analytic, GridSpec};
    use approx::assert_abs_diff_eq;

    fn sphere_network() -> CurveNetwork {
        let grid = GridSpec::new([7, 7, 7], [-3.0; 3], [1.0; 3]).unwrap();
        let field = make_analytic("sphere", &[1.0], grid).unwrap();
        CurveNetwork::build(&field, 0.0, TangentParams::default()).unwrap()
    }

    #[test]
    fn sphere_has_one_diamond_per_plane() {
        let net = sphere_network();
        assert_eq!(net.points.len(), 6);
        assert_eq!(net.chains.len(), 3);
        for chain in &net.chains {
            assert!(chain.closed);
            assert_eq!(chain.points.len(), 4);
            assert_eq!(chain.slice, 3);
        }
    }

    #[test]
    fn sphere_tangents_are_tangent_to_the_circle() {
        let net = sphere_network();
        for chain in &net.chains {
            for (&p, m) in chain.points.iter().zip(&chain.tangents) {
                let radial = net.points[p].position;
                assert_abs_diff_eq!(m.dot(&radial), 0.0, epsilon = 1e-12);
                // right-angle turn: full 1/3 of the span between neighbours
                assert_abs_diff_eq!(m.norm(), 2.0 / 3.0, epsilon = 1e-12);
                assert_eq!(m[chain.plane.normal_axis()], 0.0);
            }
        }
    }

    #[test]
    fn inside_is_left_of_travel() {
        // the sphere's Inside region is the exterior, so every chain runs
        // clockwise about the plane normal
        let net = sphere_network();
        for chain in &net.chains {
            let n = chain.plane.normal_axis();
            let mut normal = Vec3::zeros();
            normal[n] = 1.0;
            let p0 = net.points[chain.points[0]].position;
            let p1 = net.points[chain.points[1]].position;
            let left = normal.cross(&(p1 - p0));
            let mid = 0.5 * (p0 + p1);
            assert!(left.dot(&mid) > 0.0);
        }
    }

    #[test]
    fn open_chain_end_rules() {
        let pos = [
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
        ];
        let (t, fallback) = chain_tangents(&pos, false, &TangentParams::default());
        assert!(!fallback);
        // ends use the arc through (P1, P2, P3), not a wrap-around triple
        assert_abs_diff_eq!(t[0].normalize(), Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-12);
        assert_abs_diff_eq!(t[1].normalize(), Vec3::new(-1.0, 0.0, 0.0), epsilon = 1e-12);
        assert_abs_diff_eq!(t[2].normalize(), Vec3::new(0.0, -1.0, 0.0), epsilon = 1e-12);
    }

    #[test]
    fn collinear_middle_tangent() {
        let pos = [
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
        ];
        let params = TangentParams::default();
        let (t, _) = chain_tangents(&pos, false, &params);
        let factor = params.floor;
        assert_abs_diff_eq!(
            t[1],
            Vec3::new(2.0 / 3.0 * factor, 0.0, 0.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn tangent_is_capped_by_the_shorter_chord() {
        let pos = [
            Vec3::zeros(),
            Vec3::new(0.01, 0.0, 0.0),
            Vec3::new(3.01, 0.0, 0.0),
        ];
        let capped = TangentParams::default();
        let (t, _) = chain_tangents(&pos, false, &capped);
        assert_abs_diff_eq!(t[1], Vec3::new(0.02, 0.0, 0.0), epsilon = 1e-15);
        let free = TangentParams {
            chord_ratio: None,
            ..capped
        };
        let (t, _) = chain_tangents(&pos, false, &free);
        assert_abs_diff_eq!(
            t[1],
            Vec3::new(3.01 / 3.0 * 0.05, 0.0, 0.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn capped_segments_do_not_double_back() {
        // a short segment between two long ones, as next to a grid vertex
        let pos = [
            Vec3::new(-1.0, -1.0, 0.0),
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(0.01, 0.005, 0.0),
            Vec3::new(1.0, 1.2, 0.0),
        ];
        let speed_sign = |params: &TangentParams| {
            let (t, _) = chain_tangents(&pos, false, params);
            let seg = HermiteSegment::new(pos[1], pos[2], t[1], t[2]);
            let chord = seg.chord();
            (0..=100).all(|j| seg.derivative(j as f64 / 100.0).dot(&chord) > 0.0)
        };
        assert!(speed_sign(&TangentParams::default()));
        let free = TangentParams {
            chord_ratio: None,
            ..TangentParams::default()
        };
        assert!(!speed_sign(&free));
    }

    #[test]
    fn two_point_chain_uses_chord() {
        let pos = [Vec3::zeros(), Vec3::new(0.0, 3.0, 0.0)];
        let (t, fallback) = chain_tangents(&pos, false, &TangentParams::default());
        assert!(fallback);
        assert_eq!(t, vec![Vec3::new(0.0, 1.0, 0.0); 2]);
    }

    #[test]
    fn closed_square_on_circle_is_rotation_symmetric() {
        // oracle: rotating the chain by 90° permutes its tangents
        let pts: Vec<Vec3> = (0..4)
            .map(|i| {
                let a = 0.3 + i as f64 * std::f64::consts::FRAC_PI_2;
                Vec3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        let (t, _) = chain_tangents(&pts, true, &TangentParams::default());
        let rot = |v: &Vec3| Vec3::new(-v.y, v.x, v.z);
        for i in 0..4 {
            assert_abs_diff_eq!(t[i].dot(&pts[i]), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(rot(&t[i]), t[(i + 1) % 4], epsilon = 1e-12);
        }
    }
}
