use std::collections::BTreeSet;

use crate::crack::{CrackGraph, CrackIndex};

use super::Mesh;

/// Triangles whose closure meets a crack chain (touching counts).
pub fn mark_crack_elements(mesh: &Mesh, crack: &CrackGraph) -> BTreeSet<usize> {
    let index = CrackIndex::new(crack, mesh.geometric_tolerance());
    (0..mesh.num_triangles())
        .filter(|&t| index.intersects(&mesh.triangle_points(t)))
        .collect()
}

/// `marked` plus every triangle sharing a vertex with it (one ring).
pub fn neighborhood(mesh: &Mesh, marked: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut near = vec![false; mesh.num_vertices()];
    for &t in marked {
        for v in mesh.triangles()[t] {
            near[v] = true;
        }
    }
    (0..mesh.num_triangles())
        .filter(|&t| mesh.triangles()[t].iter().any(|&v| near[v]))
        .collect()
}

/// Vertex counts used to check `N ~ h^-2 + h_Γ^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofProfile {
    pub n_total: usize,
    /// Vertices of the crack triangles and their one-ring.
    pub n_near_crack: usize,
}

pub fn dof_count_profile(mesh: &Mesh, crack: &CrackGraph) -> DofProfile {
    let near = neighborhood(mesh, &mark_crack_elements(mesh, crack));
    let mut seen = vec![false; mesh.num_vertices()];
    for &t in &near {
        for v in mesh.triangles()[t] {
            seen[v] = true;
        }
    }
    DofProfile {
        n_total: mesh.num_vertices(),
        n_near_crack: seen.iter().filter(|&&s| s).count(),
    }
}
