//! JSON form of the curve network.
//!
//! Control points are stored once and referenced by index from the chains
//! of every plane, so a crossing shared by two slices is written a single
//! time. Positions are recomputed from the edge and its parameter on load.
//! Tangents are stored per chain point as their two in-plane components.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{
    crossing_position, AxialPlane, Axis, ControlPoint, CurveNetwork, EdgeCrossing, EdgeId,
    IsolineChain, TangentParams,
};
use crate::field::GridSpec;
use crate::{Error, Result, Vec3, FORMAT_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    #[serde(rename = "ms-version")]
    pub version: u32,
    pub grid: GridSpec,
    pub iso: f64,
    pub tangent: TangentParams,
    pub points: Vec<PointDoc>,
    pub planes: PlanesDoc,
}

/// A control point: its edges as `[i, j, k, axis]` and the interpolation
/// parameter along the first edge. Written as `[edges, t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "(Vec<[usize; 4]>, f64)", into = "(Vec<[usize; 4]>, f64)")]
pub struct PointDoc {
    pub edges: Vec<[usize; 4]>,
    pub t: f64,
}

impl From<(Vec<[usize; 4]>, f64)> for PointDoc {
    fn from((edges, t): (Vec<[usize; 4]>, f64)) -> Self {
        PointDoc { edges, t }
    }
}

impl From<PointDoc> for (Vec<[usize; 4]>, f64) {
    fn from(p: PointDoc) -> Self {
        (p.edges, p.t)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanesDoc {
    pub xy: Vec<ChainDoc>,
    pub yz: Vec<ChainDoc>,
    pub xz: Vec<ChainDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDoc {
    pub slice: usize,
    pub closed: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub chord_fallback: bool,
    pub points: Vec<usize>,
    /// `[u, v]` components in the plane's frame.
    pub tangents: Vec<[f64; 2]>,
}

impl PlanesDoc {
    fn get_mut(&mut self, plane: AxialPlane) -> &mut Vec<ChainDoc> {
        match plane {
            AxialPlane::Xy => &mut self.xy,
            AxialPlane::Yz => &mut self.yz,
            AxialPlane::Xz => &mut self.xz,
        }
    }

    fn get(&self, plane: AxialPlane) -> &[ChainDoc] {
        match plane {
            AxialPlane::Xy => &self.xy,
            AxialPlane::Yz => &self.yz,
            AxialPlane::Xz => &self.xz,
        }
    }
}

impl From<&CurveNetwork> for NetworkDocument {
    fn from(net: &CurveNetwork) -> Self {
        let points = net
            .points
            .iter()
            .map(|p| PointDoc {
                edges: p
                    .crossings
                    .iter()
                    .map(|c| {
                        let [i, j, k] = c.edge.origin;
                        [i, j, k, c.edge.axis.index()]
                    })
                    .collect(),
                t: p.t_edge(),
            })
            .collect();
        let mut planes = PlanesDoc::default();
        for chain in &net.chains {
            planes.get_mut(chain.plane).push(ChainDoc {
                slice: chain.slice,
                closed: chain.closed,
                chord_fallback: chain.chord_fallback,
                points: chain.points.clone(),
                tangents: chain
                    .tangents
                    .iter()
                    .map(|t| {
                        let [a, b, n] = chain.plane.axes();
                        debug_assert_eq!(t[n], 0.0);
                        [t[a], t[b]]
                    })
                    .collect(),
            });
        }
        NetworkDocument {
            version: FORMAT_VERSION,
            grid: net.grid,
            iso: net.iso,
            tangent: net.params,
            points,
            planes,
        }
    }
}

impl NetworkDocument {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("ms-version").and_then(|v| v.as_u64()) {
            Some(v) if v == FORMAT_VERSION as u64 => Ok(serde_json::from_value(value)?),
            other => Err(Error::Format(format!(
                "network ms-version {other:?}, expected {FORMAT_VERSION}"
            ))),
        }
    }

    /// Rebuilds the in-memory network. Discrete descent directions are not
    /// stored and come back as zero.
    pub fn into_network(self) -> Result<CurveNetwork> {
        self.grid.validate()?;
        let bad = |msg: String| Error::Format(msg);
        let mut points = Vec::with_capacity(self.points.len());
        for (id, p) in self.points.iter().enumerate() {
            if p.edges.is_empty() {
                return Err(bad(format!("control point {id} has no edge")));
            }
            if !(0.0..=1.0).contains(&p.t) {
                return Err(bad(format!("control point {id}: t {} outside [0, 1]", p.t)));
            }
            let mut position = Vec3::zeros();
            let mut crossings = SmallVec::new();
            for (n, e) in p.edges.iter().enumerate() {
                let [i, j, k, axis] = *e;
                if axis > 2
                    || [i, j, k]
                        .iter()
                        .zip(self.grid.dims)
                        .enumerate()
                        .any(|(d, (&c, dim))| c + usize::from(d == axis) >= dim)
                {
                    return Err(bad(format!(
                        "control point {id}: edge {e:?} outside the grid"
                    )));
                }
                let edge = EdgeId::new([i, j, k], Axis::from_index(axis));
                if n == 0 {
                    position = crossing_position(&self.grid, edge, p.t);
                }
                let t = if n == 0 {
                    p.t
                } else if position == self.grid.world(edge.origin) {
                    0.0
                } else {
                    1.0
                };
                crossings.push(EdgeCrossing {
                    edge,
                    position,
                    t_edge: t,
                });
            }
            points.push(ControlPoint {
                position,
                crossings,
                descent: Vec3::zeros(),
            });
        }

        let mut chains = Vec::new();
        for plane in AxialPlane::ALL {
            for doc in self.planes.get(plane) {
                let n = doc.points.len();
                if n < 2 || doc.tangents.len() != n {
                    return Err(bad(format!(
                        "{} chain on slice {} has {} points and {} tangents",
                        plane.name(),
                        doc.slice,
                        n,
                        doc.tangents.len()
                    )));
                }
                if let Some(&p) = doc.points.iter().find(|&&p| p >= points.len()) {
                    return Err(bad(format!("chain references missing point {p}")));
                }
                let segs = if doc.closed { n } else { n - 1 };
                let cells = (0..segs)
                    .map(|k| {
                        let (a, b) = (doc.points[k], doc.points[(k + 1) % n]);
                        shared_cell(&points[a], &points[b], plane, doc.slice).ok_or_else(|| {
                            bad(format!(
                                "points {a} and {b} share no {} cell on slice {}",
                                plane.name(),
                                doc.slice
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                chains.push(IsolineChain {
                    plane,
                    slice: doc.slice,
                    points: doc.points.clone(),
                    cells,
                    closed: doc.closed,
                    tangents: doc
                        .tangents
                        .iter()
                        .map(|&[u, v]| {
                            let [a, b, _] = plane.axes();
                            let mut t = Vec3::zeros();
                            t[a] = u;
                            t[b] = v;
                            t
                        })
                        .collect(),
                    chord_fallback: doc.chord_fallback,
                });
            }
        }
        Ok(CurveNetwork::from_parts(
            self.grid,
            self.iso,
            self.tangent,
            points,
            chains,
        ))
    }
}

/// 2D cells of `plane`/`slice` adjacent to the point's in-slice edges.
fn adjacent_cells(point: &ControlPoint, plane: AxialPlane, slice: usize) -> BTreeSet<[usize; 2]> {
    let [a, b, n] = plane.axes();
    let mut cells = BTreeSet::new();
    for c in &point.crossings {
        let o = c.edge.origin;
        if o[n] != slice || !plane.contains(c.edge.axis) {
            continue;
        }
        let (u, v) = (o[a], o[b]);
        if c.edge.axis.index() == a {
            cells.insert([u, v]);
            if v > 0 {
                cells.insert([u, v - 1]);
            }
        } else {
            cells.insert([u, v]);
            if u > 0 {
                cells.insert([u - 1, v]);
            }
        }
    }
    cells
}

fn shared_cell(
    p: &ControlPoint,
    q: &ControlPoint,
    plane: AxialPlane,
    slice: usize,
) -> Option<[usize; 2]> {
    let a = adjacent_cells(p, plane, slice);
    let b = adjacent_cells(q, plane, slice);
    a.intersection(&b).next().copied()
}
