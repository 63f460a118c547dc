//! Boundary curve network.
//!
//! Every axial slice of the grid is contoured independently. Crossings on
//! grid edges become control points shared by the (at most two) slices that
//! contain the edge, and the isolines through them become chains of cubic
//! Hermite segments with circular-arc tangents.

mod arc;
mod crossing;
mod hermite;
mod json;
mod network;
mod trace;

use serde::{Deserialize, Serialize};

pub use arc::{fit_arc, fit_arc_tangent, ArcFit};
pub use crossing::{
    crossing_position, edge_crossing, find_crossings, ControlPoint, EdgeCrossing, NodeKey,
};
pub use hermite::HermiteSegment;
pub use json::NetworkDocument;
pub use network::{
    assign_tangents, chain_tangents, CurveNetwork, FaceKey, IsolineChain, SegmentRef, TangentParams,
};
pub use trace::{trace_isolines, CellSegment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }
}

/// A grid edge, named by its lower grid point and direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId {
    pub origin: [usize; 3],
    pub axis: Axis,
}

impl EdgeId {
    pub fn new(origin: [usize; 3], axis: Axis) -> Self {
        Self { origin, axis }
    }

    pub fn endpoints(&self) -> ([usize; 3], [usize; 3]) {
        let mut hi = self.origin;
        hi[self.axis.index()] += 1;
        (self.origin, hi)
    }
}

/// One of the three families of axis-aligned slices.
///
/// Each plane carries a right-handed in-plane frame `(u, v)` whose cross
/// product is the plane normal: xy uses `(x, y)`, yz uses `(y, z)` and xz
/// uses `(z, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxialPlane {
    Xy,
    Yz,
    Xz,
}

impl AxialPlane {
    pub const ALL: [AxialPlane; 3] = [AxialPlane::Xy, AxialPlane::Yz, AxialPlane::Xz];

    /// `[u, v, normal]` axis indices.
    #[inline]
    pub fn axes(self) -> [usize; 3] {
        match self {
            AxialPlane::Xy => [0, 1, 2],
            AxialPlane::Yz => [1, 2, 0],
            AxialPlane::Xz => [2, 0, 1],
        }
    }

    #[inline]
    pub fn normal_axis(self) -> usize {
        self.axes()[2]
    }

    pub fn with_normal(axis: usize) -> AxialPlane {
        match axis {
            0 => AxialPlane::Yz,
            1 => AxialPlane::Xz,
            _ => AxialPlane::Xy,
        }
    }

    pub fn contains(self, axis: Axis) -> bool {
        self.normal_axis() != axis.index()
    }

    pub fn name(self) -> &'static str {
        match self {
            AxialPlane::Xy => "xy",
            AxialPlane::Yz => "yz",
            AxialPlane::Xz => "xz",
        }
    }

    /// Grid point of the in-slice coordinates `(u, v)` on slice `slice`.
    #[inline]
    pub fn point(self, u: usize, v: usize, slice: usize) -> [usize; 3] {
        let [a, b, n] = self.axes();
        let mut p = [0; 3];
        p[a] = u;
        p[b] = v;
        p[n] = slice;
        p
    }

    /// `(nu, nv, slices)` for a grid of the given dimensions.
    pub fn extent(self, dims: [usize; 3]) -> [usize; 3] {
        let [a, b, n] = self.axes();
        [dims[a], dims[b], dims[n]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planes_are_right_handed() {
        for plane in AxialPlane::ALL {
            let [a, b, n] = plane.axes();
            let e = |i: usize| {
                let mut v = crate::Vec3::zeros();
                v[i] = 1.0;
                v
            };
            assert_eq!(e(a).cross(&e(b)), e(n));
            assert_eq!(AxialPlane::with_normal(n), plane);
        }
    }
}
