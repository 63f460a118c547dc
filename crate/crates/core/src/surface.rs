//! The whole pipeline: field to curve network to loops to patches.

use rayon::prelude::*;

use crate::cellloop::{diagnostics_jsonl, Diagnostic, LoopSet};
use crate::curvenet::{CurveNetwork, NetworkDocument, TangentParams};
use crate::field::{classify, ScalarField};
use crate::mesh::TriangleMesh;
use crate::patch::{MultiSidedPatch, PatchDocument, PatchMode, PatchParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SurfaceOptions {
    pub tangent: TangentParams,
    pub patch: PatchParams,
}

impl SurfaceOptions {
    pub fn with_mode(mode: PatchMode) -> Self {
        SurfaceOptions::default().with_patch_mode(mode)
    }

    pub fn with_patch_mode(mut self, mode: PatchMode) -> Self {
        self.patch.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.tangent;
        if !(t.scale.is_finite() && t.scale > 0.0)
            || !(t.floor.is_finite() && (0.0..=1.0).contains(&t.floor))
        {
            return Err(Error::InvalidParams {
                field: "tangent".into(),
                reason: format!(
                    "factor {} must be positive and floor {} in [0, 1]",
                    t.scale, t.floor
                ),
            });
        }
        if let Some(r) = t.chord_ratio {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidParams {
                    field: "tangent".into(),
                    reason: format!("chord ratio {r} must be positive"),
                });
            }
        }
        self.patch.validate()
    }
}

#[derive(Debug, Clone)]
pub struct Surface {
    pub network: CurveNetwork,
    pub patches: Vec<MultiSidedPatch>,
    pub diagnostics: Vec<Diagnostic>,
    pub params: PatchParams,
}

impl Surface {
    pub fn extract(field: &ScalarField, iso: f64, opts: &SurfaceOptions) -> Result<Self> {
        opts.validate()?;
        if !iso.is_finite() {
            return Err(Error::InvalidParams {
                field: "iso".into(),
                reason: format!("{iso} is not finite"),
            });
        }
        let signs = classify(field, iso);
        let network = CurveNetwork::build_with_signs(field, &signs, opts.tangent);
        let loops = LoopSet::build(&network, &signs)?;
        let patchable: Vec<_> = loops.patchable().collect();
        let patches = patchable
            .par_iter()
            .map(|lp| MultiSidedPatch::new(lp, &opts.patch))
            .collect::<Result<Vec<_>>>()?;
        Ok(Surface {
            network,
            patches,
            diagnostics: loops.diagnostics,
            params: opts.patch,
        })
    }

    /// Rebuilds a surface from its two JSON artifacts.
    pub fn from_documents(network: NetworkDocument, patches: &PatchDocument) -> Result<Self> {
        let network = network.into_network()?;
        let list = patches.patches(&network)?;
        Ok(Surface {
            network,
            patches: list,
            diagnostics: Vec::new(),
            params: patches.params(),
        })
    }

    pub fn from_json(network: &str, patches: &str) -> Result<Self> {
        Surface::from_documents(
            NetworkDocument::from_json(network)?,
            &PatchDocument::from_json(patches)?,
        )
    }

    pub fn network_document(&self) -> NetworkDocument {
        NetworkDocument::from(&self.network)
    }

    pub fn patch_document(&self) -> PatchDocument {
        PatchDocument::new(&self.patches, &self.params)
    }

    pub fn network_json(&self) -> Result<String> {
        self.network_document().to_json()
    }

    pub fn patch_json(&self) -> Result<String> {
        self.patch_document().to_json()
    }

    /// One JSON record per line for every non-patchable loop.
    pub fn diagnostics_jsonl(&self) -> Result<String> {
        diagnostics_jsonl(&self.diagnostics)
    }

    /// The same patches blended in another mode.
    pub fn with_mode(&self, mode: PatchMode) -> Surface {
        Surface {
            network: self.network.clone(),
            patches: self.patches.iter().map(|p| p.with_mode(mode)).collect(),
            diagnostics: self.diagnostics.clone(),
            params: PatchParams {
                mode,
                ..self.params
            },
        }
    }

    /// Tessellates every patch and welds the fragments along their shared
    /// boundaries.
    pub fn tessellate(&self, level: usize) -> Result<TriangleMesh> {
        let fragments = self
            .patches
            .par_iter()
            .map(|p| p.tessellate(level))
            .collect::<Result<Vec<_>>>()?;
        Ok(TriangleMesh::weld(&fragments))
    }
}
