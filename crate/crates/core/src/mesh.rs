//! Indexed triangle meshes and their OBJ / PLY encodings.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
    /// Unit normal per vertex.
    pub normals: Vec<Vec3>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MeshFormat {
    Obj,
    Ply,
}

fn bits(p: &Vec3) -> [u64; 3] {
    // +0.0 and -0.0 are the same point
    [p.x, p.y, p.z].map(|c| if c == 0.0 { 0 } else { c.to_bits() })
}

impl TriangleMesh {
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle(&self, t: usize) -> [Vec3; 3] {
        self.triangles[t].map(|i| self.vertices[i as usize])
    }

    /// Unnormalised normal of triangle `t`, twice its area in length.
    pub fn face_normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangle(t);
        (b - a).cross(&(c - a))
    }

    /// Merges fragments, identifying vertices with bitwise equal positions.
    /// Triangles that collapse are dropped and normals are recomputed from
    /// the faces.
    pub fn weld<'a>(fragments: impl IntoIterator<Item = &'a TriangleMesh>) -> TriangleMesh {
        let mut out = TriangleMesh::default();
        let mut index: HashMap<[u64; 3], u32> = HashMap::new();
        for frag in fragments {
            let map: Vec<u32> = frag
                .vertices
                .iter()
                .map(|v| {
                    *index.entry(bits(v)).or_insert_with(|| {
                        out.vertices.push(*v);
                        (out.vertices.len() - 1) as u32
                    })
                })
                .collect();
            for t in &frag.triangles {
                out.triangles.push(t.map(|i| map[i as usize]));
            }
        }
        out.drop_degenerate();
        out.normals = out.area_weighted_normals();
        out
    }

    /// Removes triangles with repeated vertices or zero area.
    pub fn drop_degenerate(&mut self) {
        let verts = &self.vertices;
        self.triangles.retain(|&[a, b, c]| {
            if a == b || b == c || a == c {
                return false;
            }
            let [p, q, r] = [a, b, c].map(|i| verts[i as usize]);
            (q - p).cross(&(r - p)).norm() > 0.0
        });
    }

    /// Area-weighted vertex normals; isolated vertices get `+z`.
    pub fn area_weighted_normals(&self) -> Vec<Vec3> {
        let mut acc = vec![Vec3::zeros(); self.vertices.len()];
        for t in 0..self.triangles.len() {
            let n = self.face_normal(t);
            for i in self.triangles[t] {
                acc[i as usize] += n;
            }
        }
        acc.into_iter()
            .map(|n| {
                let len = n.norm();
                if len > 0.0 {
                    n / len
                } else {
                    Vec3::z()
                }
            })
            .collect()
    }

    /// Edges used by exactly one triangle.
    pub fn boundary_edges(&self) -> Vec<[u32; 2]> {
        let mut count: HashMap<[u32; 2], usize> = HashMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                *count.entry([a.min(b), a.max(b)]).or_default() += 1;
            }
        }
        let mut out: Vec<[u32; 2]> = count
            .into_iter()
            .filter_map(|(e, n)| (n == 1).then_some(e))
            .collect();
        out.sort();
        out
    }

    /// ASCII OBJ with `v`, `vn` and `f v//vn` records.
    pub fn to_obj(&self) -> String {
        let mut s = String::with_capacity(64 * self.vertices.len() + 40 * self.triangles.len());
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", v.x, v.y, v.z);
        }
        for n in &self.normals {
            let _ = writeln!(s, "vn {} {} {}", n.x, n.y, n.z);
        }
        for t in &self.triangles {
            let [a, b, c] = t.map(|i| i + 1);
            let _ = writeln!(s, "f {a}//{a} {b}//{b} {c}//{c}");
        }
        s
    }

    /// Binary little-endian PLY with float positions and normals.
    pub fn to_ply(&self) -> Vec<u8> {
        let header = format!(
            "ply\nformat binary_little_endian 1.0\nelement vertex {}\n\
             property float x\nproperty float y\nproperty float z\n\
             property float nx\nproperty float ny\nproperty float nz\n\
             element face {}\nproperty list uchar int vertex_indices\nend_header\n",
            self.vertices.len(),
            self.triangles.len()
        );
        let mut out = header.into_bytes();
        for (v, n) in self.vertices.iter().zip(&self.normals) {
            for c in v.iter().chain(n.iter()) {
                out.extend_from_slice(&(*c as f32).to_le_bytes());
            }
        }
        for t in &self.triangles {
            out.push(3);
            for i in t {
                out.extend_from_slice(&(*i as i32).to_le_bytes());
            }
        }
        out
    }

    pub fn encode(&self, format: MeshFormat) -> Vec<u8> {
        match format {
            MeshFormat::Obj => self.to_obj().into_bytes(),
            MeshFormat::Ply => self.to_ply(),
        }
    }

    pub fn write(&self, path: &Path, format: MeshFormat) -> Result<()> {
        std::fs::write(path, self.encode(format)).map_err(|e| Error::io(path, e))
    }
}
