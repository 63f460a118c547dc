use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::OnceLock;

use nalgebra::Vector2;
use smallvec::SmallVec;

use crate::cellloop::PATCHABLE_SIDES;
use crate::{Error, Result};

pub type Vec2 = Vector2<f64>;

/// Slack for points just outside the polygon.
const CONTAINS_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Footprint {
    pub k: usize,
    /// Counter-clockwise regular k-gon inscribed in the unit circle.
    pub vertices: Vec<Vec2>,
    sides: Vec<Side>,
}

#[derive(Debug, Clone, PartialEq)]
struct Side {
    start: Vec2,
    dir: Vec2,
    len: f64,
    inward: Vec2,
    /// Largest distance from the side's line to a point of the polygon.
    depth: f64,
}

/// Local coordinates of a footprint point relative to one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideFrame {
    /// Projection onto the side, `0` at its start vertex and `1` at its end.
    pub t: f64,
    /// Distance to the side's line.
    pub d: f64,
    /// `d` relative to the polygon's depth behind the side.
    pub s: f64,
}

pub type Frames = SmallVec<[SideFrame; 6]>;
pub type Weights = SmallVec<[f64; 6]>;

impl Footprint {
    pub fn regular(k: usize) -> Result<&'static Footprint> {
        static CACHE: OnceLock<Vec<Footprint>> = OnceLock::new();
        if !PATCHABLE_SIDES.contains(&k) {
            return Err(Error::Unsupported(format!("{k}-sided footprint")));
        }
        let all = CACHE.get_or_init(|| PATCHABLE_SIDES.map(Footprint::build).collect());
        Ok(&all[k - PATCHABLE_SIDES.start()])
    }

    fn build(k: usize) -> Footprint {
        let vertices: Vec<Vec2> = (0..k)
            .map(|i| {
                let a = TAU * i as f64 / k as f64 + FRAC_PI_2;
                Vec2::new(a.cos(), a.sin())
            })
            .collect();
        let sides = (0..k)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % k]);
                let len = (b - a).norm();
                let dir = (b - a) / len;
                let inward = Vec2::new(-dir.y, dir.x);
                let depth = vertices
                    .iter()
                    .map(|v| inward.dot(&(v - a)))
                    .fold(0.0, f64::max);
                Side {
                    start: a,
                    dir,
                    len,
                    inward,
                    depth,
                }
            })
            .collect();
        Footprint { k, vertices, sides }
    }

    pub fn centroid(&self) -> Vec2 {
        Vec2::zeros()
    }

    /// Inward unit normal of side `i`.
    pub fn inward(&self, i: usize) -> Vec2 {
        self.sides[i].inward
    }

    /// Point at parameter `t` along side `i`.
    pub fn side_point(&self, i: usize, t: f64) -> Vec2 {
        let (a, b) = (self.vertices[i], self.vertices[(i + 1) % self.k]);
        a + (b - a) * t
    }

    pub fn contains(&self, u: &Vec2) -> bool {
        self.sides
            .iter()
            .all(|s| s.inward.dot(&(u - s.start)) >= -CONTAINS_EPS)
    }

    pub fn side_frames(&self, u: &Vec2) -> Result<Frames> {
        if !self.contains(u) {
            return Err(Error::OutsideFootprint(u.x, u.y));
        }
        Ok(self
            .sides
            .iter()
            .map(|s| {
                let rel = u - s.start;
                let d = s.inward.dot(&rel).max(0.0);
                SideFrame {
                    t: (s.dir.dot(&rel) / s.len).clamp(0.0, 1.0),
                    d,
                    s: (d / s.depth).min(1.0),
                }
            })
            .collect())
    }
}

/// Per-side frames of `u` in `fp`.
pub fn side_frame(fp: &Footprint, u: &Vec2) -> Result<Frames> {
    fp.side_frames(u)
}

/// Normalised transfinite weights `Π_{j≠i} d_j² / Σ_m Π_{j≠m} d_j²`.
///
/// Where every product vanishes (a footprint vertex, or a degenerate point
/// on two side lines) the sides at zero distance share the weight equally.
pub fn weights(frames: &[SideFrame]) -> Weights {
    let k = frames.len();
    let raw: Weights = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i)
                .map(|j| frames[j].d * frames[j].d)
                .product()
        })
        .collect();
    let sum: f64 = raw.iter().sum();
    if sum > 0.0 {
        return raw.iter().map(|w| w / sum).collect();
    }
    let zeros = frames.iter().filter(|f| f.d == 0.0).count() as f64;
    frames
        .iter()
        .map(|f| if f.d == 0.0 { 1.0 / zeros } else { 0.0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn regular_polygons() {
        for k in 3..=6 {
            let fp = Footprint::regular(k).unwrap();
            assert_eq!(fp.vertices.len(), k);
            assert_abs_diff_eq!(fp.vertices[0], Vec2::new(0.0, 1.0), epsilon = 1e-15);
            let c: Vec2 = fp.vertices.iter().sum::<Vec2>() / k as f64;
            assert_abs_diff_eq!(c, Vec2::zeros(), epsilon = 1e-15);
            // counter-clockwise
            for i in 0..k {
                let (a, b, c) = (
                    fp.vertices[i],
                    fp.vertices[(i + 1) % k],
                    fp.vertices[(i + 2) % k],
                );
                let e1 = b - a;
                let e2 = c - b;
                assert!(e1.x * e2.y - e1.y * e2.x > 0.0);
            }
        }
        assert!(Footprint::regular(2).is_err());
        assert!(Footprint::regular(7).is_err());
    }

    #[test]
    fn square_side_midpoint() {
        let fp = Footprint::regular(4).unwrap();
        let f = fp.side_frames(&fp.side_point(0, 0.5)).unwrap();
        assert_abs_diff_eq!(f[0].t, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f[0].s, 0.0, epsilon = 1e-15);
        let w = weights(&f);
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn square_centroid_is_symmetric() {
        let fp = Footprint::regular(4).unwrap();
        let f = fp.side_frames(&Vec2::zeros()).unwrap();
        for s in &f {
            assert_abs_diff_eq!(s.d, f[0].d, epsilon = 1e-15);
            assert_abs_diff_eq!(s.s, 0.5, epsilon = 1e-15);
        }
        for w in weights(&f) {
            assert_abs_diff_eq!(w, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn triangle_vertex() {
        let fp = Footprint::regular(3).unwrap();
        let f = fp.side_frames(&fp.vertices[0]).unwrap();
        // vertex 0 ends side 2 and starts side 0
        assert_abs_diff_eq!(f[0].d, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f[2].d, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f[0].t, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f[2].t, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn vertex_rule_splits_weight() {
        let frames = [
            SideFrame {
                t: 0.0,
                d: 0.0,
                s: 0.0,
            },
            SideFrame {
                t: 0.5,
                d: 0.7,
                s: 0.5,
            },
            SideFrame {
                t: 1.0,
                d: 0.0,
                s: 0.0,
            },
        ];
        assert_eq!(weights(&frames).as_slice(), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn outside_is_rejected() {
        let fp = Footprint::regular(5).unwrap();
        assert!(matches!(
            fp.side_frames(&Vec2::new(0.0, 1.5)),
            Err(Error::OutsideFootprint(_, _))
        ));
    }

    proptest! {
        #[test]
        fn weights_sum_to_one(k in 3usize..=6, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let fp = Footprint::regular(k).unwrap();
            // a point of the fan triangle (centroid, v0, v1)
            let (b, a) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (b, a) };
            let u = fp.vertices[0] * a + fp.vertices[1] * b;
            let w = weights(&fp.side_frames(&u).unwrap());
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(w.iter().all(|&x| x >= 0.0));
        }
    }
}
