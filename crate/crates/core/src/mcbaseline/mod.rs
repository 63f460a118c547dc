//! Classic marching cubes on the same sign grid, used as the baseline.
//!
//! Vertices are the edge crossings of the curve network (same interpolation
//! and snapping), so both representations start from identical points.

mod tables;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cellloop::CORNERS;
use crate::curvenet::{edge_crossing, Axis, EdgeId, NodeKey};
use crate::field::{classify, ScalarField, SignGrid};
use crate::mesh::TriangleMesh;
use crate::Vec3;
use tables::TRI_TABLE;

const EDGE_CORNERS: [(usize, usize); 12] = [
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 0),
    (4, 5),
    (5, 6),
    (6, 7),
    (7, 4),
    (0, 4),
    (1, 5),
    (2, 6),
    (3, 7),
];

fn cube_edge(cell: [usize; 3], e: usize) -> EdgeId {
    let (a, b) = EDGE_CORNERS[e];
    let (da, db) = (CORNERS[a], CORNERS[b]);
    let axis = (0..3).find(|&i| da[i] != db[i]).unwrap();
    let origin = std::array::from_fn(|i| cell[i] + da[i].min(db[i]));
    EdgeId::new(origin, Axis::from_index(axis))
}

/// Table case of a cell: bit `c` set when corner `c` is Outside.
fn case_index(signs: &SignGrid, [i, j, k]: [usize; 3]) -> usize {
    CORNERS
        .iter()
        .enumerate()
        .filter(|(_, d)| !signs.sign([i + d[0], j + d[1], k + d[2]]).is_inside())
        .fold(0, |acc, (c, _)| acc | (1 << c))
}

pub fn marching_cubes(field: &ScalarField, iso: f64) -> TriangleMesh {
    marching_cubes_with_signs(field, &classify(field, iso))
}

pub fn marching_cubes_with_signs(field: &ScalarField, signs: &SignGrid) -> TriangleMesh {
    let [cx, cy, cz] = field.spec().cells();
    let per_slab: Vec<Vec<[EdgeId; 3]>> = (0..cz)
        .into_par_iter()
        .map(|k| {
            let mut tris = Vec::new();
            for j in 0..cy {
                for i in 0..cx {
                    let cell = [i, j, k];
                    let row = &TRI_TABLE[case_index(signs, cell)];
                    for t in row.chunks(3).take_while(|t| t[0] >= 0) {
                        tris.push([t[0], t[1], t[2]].map(|e| cube_edge(cell, e as usize)));
                    }
                }
            }
            tris
        })
        .collect();

    let mut mesh = TriangleMesh::default();
    let mut ids: HashMap<NodeKey, u32> = HashMap::new();
    let mut gradients = Vec::new();
    for tri in per_slab.into_iter().flatten() {
        let t = tri.map(|edge| {
            let c = edge_crossing(field, signs, edge).expect("table edge without sign change");
            *ids.entry(c.node_key()).or_insert_with(|| {
                mesh.vertices.push(c.position);
                let (lo, hi) = edge.endpoints();
                let g = match c.node_key() {
                    NodeKey::Grid(p) => field.gradient(p),
                    NodeKey::Edge(_) => {
                        field.gradient(lo) * (1.0 - c.t_edge) + field.gradient(hi) * c.t_edge
                    }
                };
                gradients.push(g);
                (mesh.vertices.len() - 1) as u32
            })
        });
        mesh.triangles.push(t);
    }
    mesh.drop_degenerate();
    let fallback = mesh.area_weighted_normals();
    mesh.normals = gradients
        .iter()
        .zip(fallback)
        .map(|(g, f)| {
            let n = g.norm();
            if n > 0.0 && n.is_finite() {
                -g / n
            } else {
                f
            }
        })
        .collect();
    mesh
}

/// Mean direction of `-∇f` over the triangles, against their face normals.
/// Positive when the mesh faces away from the Inside region.
pub fn orientation_score(mesh: &TriangleMesh) -> f64 {
    (0..mesh.triangles.len())
        .map(|t| {
            let n: Vec3 = mesh.triangles[t]
                .iter()
                .map(|&i| mesh.normals[i as usize])
                .sum();
            mesh.face_normal(t).dot(&n)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvenet::find_crossings;
    use crate::field::{make_analytic, GridSpec};

    fn sphere() -> ScalarField {
        let grid = GridSpec::new([7, 7, 7], [-3.0; 3], [1.0; 3]).unwrap();
        make_analytic("sphere", &[1.0], grid).unwrap()
    }

    #[test]
    fn empty_when_no_surface() {
        let grid = GridSpec::new([4, 4, 4], [0.0; 3], [1.0; 3]).unwrap();
        let field = ScalarField::from_samples(grid, vec![-1.0; 64]).unwrap();
        assert!(marching_cubes(&field, 0.0).is_empty());
    }

    #[test]
    fn unit_sphere_is_an_octahedron() {
        let mesh = marching_cubes(&sphere(), 0.0);
        assert_eq!(mesh.triangles.len(), 8);
        assert_eq!(mesh.vertices.len(), 6);
        for v in &mesh.vertices {
            assert_eq!(v.norm(), 1.0);
        }
        assert!(mesh.boundary_edges().is_empty());
        assert!(orientation_score(&mesh) > 0.0);
        for t in 0..8 {
            let c: Vec3 = mesh.triangle(t).iter().sum();
            // Inside is outside the ball: faces point to the centre
            assert!(mesh.face_normal(t).dot(&c) < 0.0);
        }
    }

    #[test]
    fn affine_field_is_planar() {
        let grid = GridSpec::spanning([6, 6, 6], -1.0, 1.0).unwrap();
        let mut samples = Vec::new();
        for p in grid.points() {
            let w = grid.world(p);
            samples.push(0.3 * w.x - 0.5 * w.y + 0.8 * w.z - 0.1);
        }
        let field = ScalarField::from_samples(grid, samples).unwrap();
        let mesh = marching_cubes(&field, 0.0);
        assert!(!mesh.is_empty());
        for v in &mesh.vertices {
            assert!((0.3 * v.x - 0.5 * v.y + 0.8 * v.z - 0.1).abs() < 1e-9);
        }
        assert!(orientation_score(&mesh) > 0.0);
    }

    #[test]
    fn blend_is_watertight_and_matches_crossings() {
        let grid = GridSpec::spanning([20, 20, 20], -3.0, 3.0).unwrap();
        let field = make_analytic("blend", &[], grid).unwrap();
        let mesh = marching_cubes(&field, 0.0);
        let signs = classify(&field, 0.0);
        let crossings = find_crossings(&signs, &field);
        assert_eq!(mesh.vertices.len(), crossings.len());
        let mut want: Vec<[u64; 3]> = crossings
            .iter()
            .map(|c| c.position.map(f64::to_bits).into())
            .collect();
        let mut got: Vec<[u64; 3]> = mesh
            .vertices
            .iter()
            .map(|v| v.map(f64::to_bits).into())
            .collect();
        want.sort();
        got.sort();
        assert_eq!(want, got);
        // the surface leaves the box, so only edges on the box faces are open
        let lo = grid.world([0, 0, 0]);
        let hi = grid.world([19, 19, 19]);
        for [a, b] in mesh.boundary_edges() {
            let (p, q) = (mesh.vertices[a as usize], mesh.vertices[b as usize]);
            let on_face = (0..3)
                .any(|i| (p[i] == lo[i] && q[i] == lo[i]) || (p[i] == hi[i] && q[i] == hi[i]));
            assert!(on_face);
        }
        for n in &mesh.normals {
            assert!((n.norm() - 1.0).abs() < 1e-9);
        }
    }
}
