//! Conforming triangulations, crack marking and interface-local refinement.
//!
//! Triangles are stored counterclockwise with the newest vertex first, so the
//! edge opposite `triangle[0]` is the refinement edge used by newest-vertex
//! bisection. Meshes coming out of [`build_rectangle_mesh`] and
//! [`refine_near_crack`] keep that convention; [`Mesh::new`] rotates
//! arbitrary input so that the refinement edge is the longest edge.

mod build;
mod io;
mod mark;
mod refine;

pub use build::{build_rectangle_mesh, Rectangle};
pub use io::{read_mesh_text, write_mesh_text, write_vtk};
pub use mark::{dof_count_profile, mark_crack_elements, neighborhood, DofProfile};
pub use refine::{bisect_marked, refine_near_crack, GammaRule, RefinementConfig, Refiner};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geom::{self, Aabb, Point};
use crate::{Error, Result};

/// Side of the rectangular domain a boundary edge lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryTag {
    Left,
    Right,
    Bottom,
    Top,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 4] = [Self::Left, Self::Right, Self::Bottom, Self::Top];

    pub fn name(self) -> &'static str {
        match self {
            Self::Left => "left",
            Self::Right => "right",
            Self::Bottom => "bottom",
            Self::Top => "top",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
}

#[inline]
pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Mesh {
    /// Builds a mesh from raw arrays. Triangles must be counterclockwise with
    /// positive area; each one is rotated so its longest edge is the
    /// refinement edge.
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<BoundaryEdge>,
    ) -> Result<Self> {
        let mut mesh = Self::from_parts(vertices, triangles, boundary)?;
        for t in 0..mesh.triangles.len() {
            let [a, b, c] = mesh.triangles[t];
            let p = mesh.triangle_points(t);
            let opp = [(p[1] - p[2]).norm(), (p[2] - p[0]).norm(), (p[0] - p[1]).norm()];
            let mut k = 0;
            for i in 1..3 {
                if opp[i] > opp[k] * (1.0 + 1e-12) {
                    k = i;
                }
            }
            mesh.triangles[t] = match k {
                0 => [a, b, c],
                1 => [b, c, a],
                _ => [c, a, b],
            };
        }
        Ok(mesh)
    }

    /// Builds a mesh whose triangle vertex order already encodes the
    /// refinement edges.
    pub(crate) fn from_parts(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<BoundaryEdge>,
    ) -> Result<Self> {
        let n = vertices.len();
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!("triangle {t} references a missing vertex")));
            }
        }
        if boundary.iter().any(|e| e.vertices.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidMesh("boundary edge references a missing vertex".into()));
        }
        let mesh = Self {
            vertices,
            triangles,
            boundary,
        };
        for t in 0..mesh.triangles.len() {
            let area = geom::signed_area(&mesh.triangle_points(t));
            if !(area > 0.0) {
                return Err(Error::DegenerateTriangle { triangle: t, area });
            }
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    #[inline]
    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Element diameter `h_T` (longest edge).
    pub fn diameter(&self, t: usize) -> f64 {
        geom::diameter(&self.triangle_points(t))
    }

    pub fn diameters(&self) -> Vec<f64> {
        (0..self.triangles.len()).map(|t| self.diameter(t)).collect()
    }

    /// Global mesh parameter `h = max h_T`.
    pub fn max_diameter(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.diameter(t)).fold(0.0, f64::max)
    }

    pub fn min_angle_deg(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| geom::min_angle_deg(&self.triangle_points(t)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn bounding_box(&self) -> Aabb {
        Aabb::from_points(&self.vertices)
    }

    /// Diameter of the bounding box, the length scale for tolerances.
    pub fn domain_diameter(&self) -> f64 {
        self.bounding_box().diagonal()
    }

    /// Absolute geometric tolerance used by all incidence predicates.
    pub fn geometric_tolerance(&self) -> f64 {
        1e-12 * self.domain_diameter()
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| geom::signed_area(&self.triangle_points(t)))
            .sum()
    }

    /// Triangles incident to each vertex.
    pub fn vertex_triangles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                out[v].push(t);
            }
        }
        out
    }

    /// Sorted vertex neighbours of each vertex (the stiffness sparsity pattern
    /// without the diagonal).
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for tri in &self.triangles {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        out[tri[i]].push(tri[j]);
                    }
                }
            }
        }
        for row in &mut out {
            row.sort_unstable();
            row.dedup();
        }
        out
    }

    /// Checks orientation and conformity: every interior edge is shared by
    /// exactly two triangles, every boundary edge belongs to exactly one
    /// triangle and is listed in the boundary, and nothing else is one-sided.
    pub fn check_conforming(&self) -> Result<()> {
        let mut count: HashMap<(usize, usize), u32> = HashMap::with_capacity(self.triangles.len() * 2);
        for (t, tri) in self.triangles.iter().enumerate() {
            let area = geom::signed_area(&self.triangle_points(t));
            if !(area > 0.0) {
                return Err(Error::DegenerateTriangle { triangle: t, area });
            }
            for i in 0..3 {
                *count.entry(edge_key(tri[i], tri[(i + 1) % 3])).or_default() += 1;
            }
        }
        let mut on_boundary = HashMap::with_capacity(self.boundary.len());
        for e in &self.boundary {
            let key = edge_key(e.vertices[0], e.vertices[1]);
            if on_boundary.insert(key, ()).is_some() {
                return Err(Error::InvalidMesh(format!("boundary edge {key:?} listed twice")));
            }
            if count.get(&key) != Some(&1) {
                return Err(Error::InvalidMesh(format!(
                    "boundary edge {key:?} is not owned by exactly one triangle"
                )));
            }
        }
        for (key, &c) in &count {
            match c {
                1 if on_boundary.contains_key(key) => {}
                2 if !on_boundary.contains_key(key) => {}
                _ => {
                    return Err(Error::InvalidMesh(format!(
                        "edge {key:?} is shared by {c} triangles (hanging node or overlap)"
                    )))
                }
            }
        }
        Ok(())
    }
}
