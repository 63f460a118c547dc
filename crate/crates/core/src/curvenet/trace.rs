//! Marching squares on one axial slice.

use std::collections::HashMap;

use smallvec::SmallVec;

use super::{AxialPlane, Axis, EdgeId, IsolineChain};
use crate::field::{ScalarField, Sign, SignGrid};

/// An oriented isoline piece inside one 2D cell: Inside lies to the left of
/// travel with respect to the plane normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellSegment {
    pub from: usize,
    pub to: usize,
    pub cell: [usize; 2],
}

/// Edges of a 2D cell in counter-clockwise order. Edge `e` joins corner `e`
/// and corner `e + 1`.
fn cell_edges(plane: AxialPlane, u: usize, v: usize, slice: usize) -> [EdgeId; 4] {
    let [a, b, _] = plane.axes();
    let (ua, va) = (Axis::from_index(a), Axis::from_index(b));
    [
        EdgeId::new(plane.point(u, v, slice), ua),
        EdgeId::new(plane.point(u + 1, v, slice), va),
        EdgeId::new(plane.point(u, v + 1, slice), ua),
        EdgeId::new(plane.point(u, v, slice), va),
    ]
}

fn cell_corners(plane: AxialPlane, u: usize, v: usize, slice: usize) -> [[usize; 3]; 4] {
    [
        plane.point(u, v, slice),
        plane.point(u + 1, v, slice),
        plane.point(u + 1, v + 1, slice),
        plane.point(u, v + 1, slice),
    ]
}

/// Oriented segments of one 2D cell as pairs of edge slots.
///
/// Saddle cells are split by the bilinear interpolant at the cell centre:
/// when it is Inside the two Inside corners stay connected.
pub(crate) fn cell_pairs(values: [f64; 4], iso: f64) -> SmallVec<[(usize, usize); 2]> {
    let signs = values.map(|v| Sign::of(v, iso));
    let crossed: SmallVec<[usize; 4]> =
        (0..4).filter(|&e| signs[e] != signs[(e + 1) % 4]).collect();
    let mut out = SmallVec::new();
    // A segment between slots `x` and `y` cuts off the corners strictly
    // between them going counter-clockwise from `x`.
    let orient = |x: usize, y: usize, first_cut: usize| {
        if signs[first_cut].is_inside() {
            (y, x)
        } else {
            (x, y)
        }
    };
    match crossed.len() {
        2 => {
            let (p, q) = (crossed[0], crossed[1]);
            out.push(orient(p, q, (p + 1) % 4));
        }
        4 => {
            let centre = 0.25 * (values[0] + values[1] + values[2] + values[3]);
            let centre_inside = Sign::of(centre, iso).is_inside();
            // Cut off the corners whose sign differs from the centre.
            let cut = if signs[0].is_inside() != centre_inside {
                [0, 2]
            } else {
                [1, 3]
            };
            for c in cut {
                out.push(orient((c + 3) % 4, c, c));
            }
        }
        _ => {}
    }
    out
}

/// Traces every isoline of one slice.
///
/// `nodes` maps crossing edges to control point ids. Chains are returned
/// without tangents; see [`super::assign_tangents`].
pub fn trace_isolines(
    field: &ScalarField,
    signs: &SignGrid,
    nodes: &HashMap<EdgeId, usize>,
    plane: AxialPlane,
    slice: usize,
) -> Vec<IsolineChain> {
    let [nu, nv, _] = plane.extent(field.spec().dims);
    let mut segments = Vec::new();
    for v in 0..nv - 1 {
        for u in 0..nu - 1 {
            let corners = cell_corners(plane, u, v, slice);
            let values = corners.map(|c| field.value(c));
            let pairs = cell_pairs(values, signs.iso);
            if pairs.is_empty() {
                continue;
            }
            let edges = cell_edges(plane, u, v, slice);
            for (x, y) in pairs {
                let from = nodes[&edges[x]];
                let to = nodes[&edges[y]];
                // both crossings snapped onto the same grid point
                if from != to {
                    segments.push(CellSegment {
                        from,
                        to,
                        cell: [u, v],
                    });
                }
            }
        }
    }
    link_segments(&segments, plane, slice)
}

fn link_segments(segments: &[CellSegment], plane: AxialPlane, slice: usize) -> Vec<IsolineChain> {
    let mut outgoing: HashMap<usize, SmallVec<[usize; 2]>> = HashMap::new();
    let mut in_degree: HashMap<usize, usize> = HashMap::new();
    for (i, s) in segments.iter().enumerate() {
        outgoing.entry(s.from).or_default().push(i);
        *in_degree.entry(s.to).or_default() += 1;
    }
    let out_degree = |n: usize| outgoing.get(&n).map_or(0, |v| v.len());
    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();

    let walk = |start: usize, used: &mut Vec<bool>| {
        let mut points = vec![segments[start].from];
        let mut cells = Vec::new();
        let mut current = Some(start);
        while let Some(i) = current {
            used[i] = true;
            let seg = segments[i];
            cells.push(seg.cell);
            points.push(seg.to);
            if seg.to == points[0] {
                break;
            }
            current = outgoing
                .get(&seg.to)
                .and_then(|cands| cands.iter().copied().find(|&c| !used[c]));
        }
        let closed = points.len() > 2 && points.first() == points.last();
        if closed {
            points.pop();
        }
        IsolineChain {
            plane,
            slice,
            points,
            cells,
            closed,
            tangents: Vec::new(),
            chord_fallback: false,
        }
    };

    // Open chains start where more pieces leave a node than arrive.
    for i in 0..segments.len() {
        let from = segments[i].from;
        if !used[i] && out_degree(from) > in_degree.get(&from).copied().unwrap_or(0) {
            chains.push(walk(i, &mut used));
        }
    }
    for i in 0..segments.len() {
        if !used[i] {
            chains.push(walk(i, &mut used));
        }
    }
    chains
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_inside_corner() {
        let pairs = cell_pairs([1.0, -1.0, -1.0, -1.0], 0.0);
        // corner 0 is cut off by the piece joining edge 3 and edge 0,
        // travelling from edge 0 to edge 3 keeps corner 0 on the left
        assert_eq!(pairs.as_slice(), &[(0, 3)]);
    }

    #[test]
    fn single_outside_corner() {
        let pairs = cell_pairs([-1.0, 1.0, 1.0, 1.0], 0.0);
        assert_eq!(pairs.as_slice(), &[(3, 0)]);
    }

    #[test]
    fn saddle_uses_centre_value() {
        // corners 0 and 2 Inside; centre (2 + 2 - 3 - 3) / 4 < 0 is Outside,
        // so the Inside corners are separated
        let pairs = cell_pairs([2.0, -3.0, 2.0, -3.0], 0.0);
        assert_eq!(pairs.as_slice(), &[(0, 3), (2, 1)]);
        // centre Inside: the Outside corners are cut off instead
        let pairs = cell_pairs([3.0, -2.0, 3.0, -2.0], 0.0);
        assert_eq!(pairs.as_slice(), &[(0, 1), (2, 3)]);
    }

    #[test]
    fn uniform_cells_are_empty() {
        assert!(cell_pairs([1.0; 4], 0.0).is_empty());
        assert!(cell_pairs([-1.0; 4], 0.0).is_empty());
        assert!(cell_pairs([0.0; 4], 0.0).is_empty());
    }
}
