use smallvec::SmallVec;

use super::{Axis, EdgeId};
use crate::field::{GridSpec, ScalarField, SignGrid};
use crate::Vec3;

/// Crossings closer than this to a grid point are snapped onto it.
const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCrossing {
    pub edge: EdgeId,
    pub position: Vec3,
    pub t_edge: f64,
}

impl EdgeCrossing {
    /// Identity of the control point this crossing belongs to. Crossings
    /// snapped onto a grid point share that point's key.
    pub fn node_key(&self) -> NodeKey {
        let (lo, hi) = self.edge.endpoints();
        if self.t_edge == 0.0 {
            NodeKey::Grid(lo)
        } else if self.t_edge == 1.0 {
            NodeKey::Grid(hi)
        } else {
            NodeKey::Edge(self.edge)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKey {
    Edge(EdgeId),
    Grid([usize; 3]),
}

/// Linear-proportion crossing on `edge`, if its endpoint signs differ.
pub fn edge_crossing(field: &ScalarField, signs: &SignGrid, edge: EdgeId) -> Option<EdgeCrossing> {
    let (lo, hi) = edge.endpoints();
    if signs.sign(lo) == signs.sign(hi) {
        return None;
    }
    let (f0, f1) = (field.value(lo), field.value(hi));
    let spec = field.spec();
    let axis = edge.axis.index();
    let len = spec.spacing[axis];
    let mut t = ((signs.iso - f0) / (f1 - f0)).clamp(0.0, 1.0);
    if t * len < SNAP {
        t = 0.0;
    } else if (1.0 - t) * len < SNAP {
        t = 1.0;
    }
    Some(EdgeCrossing {
        edge,
        position: crossing_position(spec, edge, t),
        t_edge: t,
    })
}

/// World position at parameter `t` along `edge`.
pub fn crossing_position(spec: &GridSpec, edge: EdgeId, t: f64) -> Vec3 {
    let (lo, hi) = edge.endpoints();
    let axis = edge.axis.index();
    let (a, b) = (spec.world(lo), spec.world(hi));
    let mut position = a;
    position[axis] = (1.0 - t) * a[axis] + t * b[axis];
    position
}

/// All sign-change crossings, ordered by edge id.
pub fn find_crossings(signs: &SignGrid, field: &ScalarField) -> Vec<EdgeCrossing> {
    let dims = field.spec().dims;
    let mut out: Vec<EdgeCrossing> = field
        .spec()
        .points()
        .flat_map(|p| {
            Axis::ALL.into_iter().filter_map(move |axis| {
                (p[axis.index()] + 1 < dims[axis.index()]).then_some(EdgeId::new(p, axis))
            })
        })
        .filter_map(|edge| edge_crossing(field, signs, edge))
        .collect();
    out.sort_by_key(|c| c.edge);
    out
}

/// A node of the curve network: one or more coincident edge crossings.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPoint {
    pub position: Vec3,
    pub crossings: SmallVec<[EdgeCrossing; 1]>,
    /// Sum of unit edge directions from the Inside endpoint toward the
    /// Outside endpoint, i.e. a discrete descent direction of the field.
    pub descent: Vec3,
}

impl ControlPoint {
    pub(crate) fn new(crossing: EdgeCrossing, signs: &SignGrid) -> Self {
        let mut cp = Self {
            position: crossing.position,
            crossings: SmallVec::new(),
            descent: Vec3::zeros(),
        };
        cp.push(crossing, signs);
        cp
    }

    pub(crate) fn push(&mut self, crossing: EdgeCrossing, signs: &SignGrid) {
        let (lo, _) = crossing.edge.endpoints();
        let mut dir = Vec3::zeros();
        dir[crossing.edge.axis.index()] = if signs.sign(lo).is_inside() {
            1.0
        } else {
            -1.0
        };
        self.descent += dir;
        self.crossings.push(crossing);
    }

    pub fn edge(&self) -> EdgeId {
        self.crossings[0].edge
    }

    pub fn t_edge(&self) -> f64 {
        self.crossings[0].t_edge
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{classify, GridSpec};

    fn edge_field(f0: f64, f1: f64) -> (ScalarField, SignGrid) {
        let spec = GridSpec::new([2, 2, 2], [0.0; 3], [1.0; 3]).unwrap();
        let mut samples = vec![f0; 8];
        for k in 0..2 {
            for j in 0..2 {
                samples[spec.index([1, j, k])] = f1;
            }
        }
        let field = ScalarField::from_samples(spec, samples).unwrap();
        let signs = classify(&field, 0.0);
        (field, signs)
    }

    #[test]
    fn midpoint_crossing() {
        let (f, s) = edge_field(-1.0, 1.0);
        let c = edge_crossing(&f, &s, EdgeId::new([0, 0, 0], Axis::X)).unwrap();
        assert_eq!(c.t_edge, 0.5);
        assert_eq!(c.position, Vec3::new(0.5, 0.0, 0.0));
    }

    #[test]
    fn linear_proportion() {
        let (f, s) = edge_field(-1.0, 3.0);
        let c = edge_crossing(&f, &s, EdgeId::new([0, 0, 0], Axis::X)).unwrap();
        assert_eq!(c.t_edge, 0.25);
        assert_eq!(c.position.x, 0.25);
    }

    #[test]
    fn no_crossing_without_sign_change() {
        let (f, s) = edge_field(1.0, 2.0);
        assert!(edge_crossing(&f, &s, EdgeId::new([0, 0, 0], Axis::X)).is_none());
        assert!(find_crossings(&s, &f).is_empty());
    }

    #[test]
    fn tie_lands_on_grid_point() {
        let (f, s) = edge_field(-1.0, 0.0);
        let c = edge_crossing(&f, &s, EdgeId::new([0, 0, 0], Axis::X)).unwrap();
        assert_eq!(c.t_edge, 1.0);
        assert_eq!(c.node_key(), NodeKey::Grid([1, 0, 0]));
    }

    #[test]
    fn crossings_sorted_and_complete() {
        let (f, s) = edge_field(-1.0, 3.0);
        let all = find_crossings(&s, &f);
        assert_eq!(all.len(), 4);
        assert!(all.windows(2).all(|w| w[0].edge < w[1].edge));
        assert!(all.iter().all(|c| c.edge.axis == Axis::X));
    }
}
