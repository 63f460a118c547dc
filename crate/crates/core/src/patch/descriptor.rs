//! JSON form of the patches.
//!
//! A patch is stored as its cell and the control point ids of its loop
//! vertices. Curves, tangents and ribbon offsets are recovered from the curve
//! network, so the descriptors add only connectivity on top of it.

use serde::{Deserialize, Serialize};

use super::{MultiSidedPatch, PatchMode, PatchParams};
use crate::cellloop::CellLoop;
use crate::curvenet::CurveNetwork;
use crate::{Error, Result, FORMAT_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchDocument {
    #[serde(rename = "ms-version")]
    pub version: u32,
    pub mode: PatchMode,
    pub s_ramp: f64,
    /// Fixed ribbon width, or `null` for a third of each loop's mean chord.
    pub width: Option<f64>,
    pub patches: Vec<PatchDoc>,
}

/// Written as `[cell, nodes]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "([usize; 3], Vec<usize>)", into = "([usize; 3], Vec<usize>)")]
pub struct PatchDoc {
    pub cell: [usize; 3],
    /// Loop vertices in winding order; the side count is their number.
    pub nodes: Vec<usize>,
}

impl From<([usize; 3], Vec<usize>)> for PatchDoc {
    fn from((cell, nodes): ([usize; 3], Vec<usize>)) -> Self {
        PatchDoc { cell, nodes }
    }
}

impl From<PatchDoc> for ([usize; 3], Vec<usize>) {
    fn from(d: PatchDoc) -> Self {
        (d.cell, d.nodes)
    }
}

impl PatchDocument {
    pub fn new(patches: &[MultiSidedPatch], params: &PatchParams) -> Self {
        PatchDocument {
            version: FORMAT_VERSION,
            mode: params.mode,
            s_ramp: params.s_ramp,
            width: params.width,
            patches: patches
                .iter()
                .map(|p| PatchDoc {
                    cell: p.cell,
                    nodes: p.nodes.clone(),
                })
                .collect(),
        }
    }

    pub fn params(&self) -> PatchParams {
        PatchParams {
            mode: self.mode,
            width: self.width,
            s_ramp: self.s_ramp,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("ms-version").and_then(|v| v.as_u64()) {
            Some(v) if v == FORMAT_VERSION as u64 => Ok(serde_json::from_value(value)?),
            other => Err(Error::Format(format!(
                "patch ms-version {other:?}, expected {FORMAT_VERSION}"
            ))),
        }
    }

    /// Rebuilds the patches over `net`.
    pub fn patches(&self, net: &CurveNetwork) -> Result<Vec<MultiSidedPatch>> {
        let params = self.params();
        params.validate()?;
        self.patches
            .iter()
            .map(|d| {
                if let Some(&n) = d.nodes.iter().find(|&&n| n >= net.points.len()) {
                    return Err(Error::Format(format!(
                        "patch in cell {:?} references missing point {n}",
                        d.cell
                    )));
                }
                let lp = CellLoop::from_nodes(net, d.cell, &d.nodes)?;
                MultiSidedPatch::new(&lp, &params).map_err(|e| match e {
                    Error::Unsupported(msg) => Error::Format(msg),
                    e => e,
                })
            })
            .collect()
    }
}
