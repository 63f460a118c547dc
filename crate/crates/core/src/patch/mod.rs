//! Multi-sided transfinite patches.
//!
//! A loop of `k` boundary curves is parameterised over a regular k-gon (its
//! footprint). A footprint point `u` is projected onto every side, giving a
//! curve parameter `t_i` and a distance `d_i`. The G⁰ surface blends the
//! boundary points `f_i(t_i)` with the weights
//! `Π_{j≠i} d_j² / Σ_m Π_{j≠m} d_j²`. The G¹ surface replaces each boundary
//! point by a point of the side's ribbon and blends with squared,
//! renormalised weights.

mod descriptor;
pub mod footprint;
mod ribbon;

use serde::{Deserialize, Serialize};

pub use descriptor::{PatchDoc, PatchDocument};
pub use footprint::{side_frame, weights, Footprint, SideFrame, Vec2};
pub use ribbon::{build_ribbons, Ribbon};

use crate::cellloop::{CellLoop, LoopCurve};
use crate::mesh::TriangleMesh;
use crate::{Error, Result, Vec3};

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum PatchMode {
    G0,
    #[default]
    G1,
}

impl PatchMode {
    pub fn name(self) -> &'static str {
        match self {
            PatchMode::G0 => "g0",
            PatchMode::G1 => "g1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchParams {
    pub mode: PatchMode,
    /// Ribbon width; `None` uses a third of the loop's mean chord length.
    pub width: Option<f64>,
    /// Fraction of the footprint depth over which a ribbon is ramped in.
    pub s_ramp: f64,
}

impl Default for PatchParams {
    fn default() -> Self {
        PatchParams {
            mode: PatchMode::G1,
            width: None,
            s_ramp: 0.5,
        }
    }
}

impl PatchParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidParams {
            field: "patch".into(),
            reason,
        };
        if let Some(w) = self.width {
            if !(w.is_finite() && w > 0.0) {
                return Err(bad(format!("ribbon width {w} must be positive")));
            }
        }
        if !(self.s_ramp > 0.0 && self.s_ramp <= 1.0) {
            return Err(bad(format!("s_ramp {} must lie in (0, 1]", self.s_ramp)));
        }
        Ok(())
    }

    pub fn width_for(&self, lp: &CellLoop) -> f64 {
        self.width.unwrap_or_else(|| lp.mean_chord() / 3.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiSidedPatch {
    pub cell: [usize; 3],
    /// Control point ids of the loop vertices.
    pub nodes: Vec<usize>,
    pub curves: Vec<LoopCurve>,
    pub ribbons: Vec<Ribbon>,
    pub footprint: &'static Footprint,
    pub mode: PatchMode,
    pub width: f64,
    pub s_ramp: f64,
}

impl MultiSidedPatch {
    pub fn new(lp: &CellLoop, params: &PatchParams) -> Result<Self> {
        params.validate()?;
        let footprint = Footprint::regular(lp.len())?;
        let width = params.width_for(lp);
        Ok(MultiSidedPatch {
            cell: lp.cell,
            nodes: lp.nodes(),
            curves: lp.curves.clone(),
            ribbons: build_ribbons(lp, width)?,
            footprint,
            mode: params.mode,
            width,
            s_ramp: params.s_ramp,
        })
    }

    pub fn k(&self) -> usize {
        self.curves.len()
    }

    pub fn with_mode(&self, mode: PatchMode) -> Self {
        MultiSidedPatch {
            mode,
            ..self.clone()
        }
    }

    pub fn eval(&self, u: &Vec2) -> Result<Vec3> {
        match self.mode {
            PatchMode::G0 => self.eval_g0(u),
            PatchMode::G1 => self.eval_g1(u),
        }
    }

    /// Loop vertex at `u`, if `u` lies on two adjacent side lines.
    fn corner(&self, frames: &[SideFrame]) -> Option<Vec3> {
        let k = frames.len();
        (0..k)
            .find(|&i| frames[i].d == 0.0 && frames[(i + k - 1) % k].d == 0.0)
            .map(|i| self.curves[i].curve.p0)
    }

    pub fn eval_g0(&self, u: &Vec2) -> Result<Vec3> {
        let frames = self.footprint.side_frames(u)?;
        if let Some(p) = self.corner(&frames) {
            return Ok(p);
        }
        let w = weights(&frames);
        Ok((0..self.k())
            .filter(|&i| w[i] > 0.0)
            .map(|i| self.curves[i].eval(frames[i].t) * w[i])
            .sum())
    }

    pub fn eval_g1(&self, u: &Vec2) -> Result<Vec3> {
        let frames = self.footprint.side_frames(u)?;
        if let Some(p) = self.corner(&frames) {
            return Ok(p);
        }
        let w = weights(&frames);
        let mut acc = Vec3::zeros();
        let mut norm = 0.0;
        for i in (0..self.k()).filter(|&i| w[i] > 0.0) {
            let w2 = w[i] * w[i];
            let sigma = (frames[i].s / self.s_ramp).min(1.0);
            acc += self.ribbons[i].eval(sigma, frames[i].t) * w2;
            norm += w2;
        }
        Ok(acc / norm)
    }

    /// Triangulates the footprint as a fan of `k` triangles around the
    /// centroid, each split into `level²` triangles. Points on the boundary
    /// are taken from the curves at `j / level` so neighbouring patches share
    /// them bitwise.
    pub fn tessellate(&self, level: usize) -> Result<TriangleMesh> {
        let level = level.max(1);
        let k = self.k();
        let fp = self.footprint;
        let mut vertices = vec![self.eval(&fp.centroid())?];

        // spoke j, row r in 1..=level
        let spoke_base = vertices.len();
        for j in 0..k {
            for r in 1..=level {
                let p = if r == level {
                    self.curves[j].eval_sample(0, level)
                } else {
                    self.eval(&(fp.vertices[j] * (r as f64 / level as f64)))?
                };
                vertices.push(p);
            }
        }
        let spoke = |j: usize, r: usize| (spoke_base + (j % k) * level + r - 1) as u32;

        let mut triangles = Vec::with_capacity(k * level * level);
        for i in 0..k {
            let (a, b) = (fp.vertices[i], fp.vertices[(i + 1) % k]);
            // interior row points of this fan triangle, s in 1..r
            let mut rows: Vec<Vec<u32>> = vec![Vec::new(); level + 1];
            for (r, row) in rows.iter_mut().enumerate().skip(2) {
                for s in 1..r {
                    let p = if r == level {
                        self.curves[i].eval_sample(s, level)
                    } else {
                        let f = r as f64 / level as f64;
                        self.eval(&((a + (b - a) * (s as f64 / r as f64)) * f))?
                    };
                    vertices.push(p);
                    row.push((vertices.len() - 1) as u32);
                }
            }
            let at = |r: usize, s: usize| -> u32 {
                if r == 0 {
                    0
                } else if s == 0 {
                    spoke(i, r)
                } else if s == r {
                    spoke(i + 1, r)
                } else {
                    rows[r][s - 1]
                }
            };
            for r in 0..level {
                for s in 0..=r {
                    triangles.push([at(r, s), at(r + 1, s), at(r + 1, s + 1)]);
                    if s < r {
                        triangles.push([at(r, s), at(r + 1, s + 1), at(r, s + 1)]);
                    }
                }
            }
        }
        Ok(TriangleMesh {
            vertices,
            triangles,
            normals: Vec::new(),
        })
    }
}
