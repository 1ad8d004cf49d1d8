//! Assembly of `A(u, v) = (a∇u, ∇v)_Ω + (a_Γ ∇_Γ u, ∇_Γ v)_Γ` and
//! `L(v) = (f, v)_Ω + (f_Γ, v)_Γ` on the P1 space.
//!
//! The crack term uses the hat-function gradients of the triangle that owns
//! each crack segment: on a segment with unit tangent `t` the tangential
//! gradient of `φ_i` is `(t·∇φ_i) t`, so the segment contributes the rank-one
//! matrix `a_Γ |S| (t·∇φ_i)(t·∇φ_j)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::crack::{signed_distance_to_crack, CrackGraph, SegmentedCrack};
use crate::geom::{self, Point, Vec2};
use crate::mesh::{BoundaryTag, Mesh};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

pub fn constant(v: f64) -> ScalarFn {
    Arc::new(move |_| v)
}

/// Gradients of the three barycentric hat functions and the area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGradients {
    pub gradients: [Vec2; 3],
    pub area: f64,
}

pub fn element_gradients(tri: &[Point; 3]) -> Result<ElementGradients> {
    let area = geom::signed_area(tri);
    let scale = geom::diameter(tri);
    if !(area > 1e-14 * scale * scale) {
        return Err(Error::DegenerateTriangle { triangle: usize::MAX, area });
    }
    let two_a = 2.0 * area;
    let gradients = std::array::from_fn(|i| {
        let p1 = tri[(i + 1) % 3];
        let p2 = tri[(i + 2) % 3];
        Vec2::new(p1.y - p2.y, p2.x - p1.x) / two_a
    });
    Ok(ElementGradients { gradients, area })
}

/// `a · |T| · ∇φ_i · ∇φ_j`.
pub fn bulk_element_matrix(tri: &[Point; 3], a: f64) -> Result<[[f64; 3]; 3]> {
    let g = element_gradients(tri)?;
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = a * g.area * g.gradients[i].dot(&g.gradients[j]);
        }
    }
    Ok(k)
}

/// `a_Γ · |S| · (t·∇φ_i)(t·∇φ_j)` for the segment `start → end` inside `tri`.
pub fn interface_segment_matrix(start: &Point, end: &Point, tri: &[Point; 3], a_gamma: f64) -> Result<[[f64; 3]; 3]> {
    let g = element_gradients(tri)?;
    let len = (end - start).norm();
    let h = geom::diameter(tri);
    if !(len > 1e-14 * h) {
        return Err(Error::SegmentTriangleMismatch(usize::MAX));
    }
    for p in [start, end] {
        if geom::barycentric(tri, p).iter().any(|&l| l < -1e-6) {
            return Err(Error::SegmentTriangleMismatch(usize::MAX));
        }
    }
    let t = (end - start) / len;
    let d = g.gradients.map(|gi| t.dot(&gi));
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            k[i][j] = a_gamma * len * d[i] * d[j];
            k[j][i] = k[i][j];
        }
    }
    Ok(k)
}

/// `(f, φ_i)_Ω` by the vertex rule plus `(f_Γ, φ_i)_Γ` by the segment
/// midpoint rule.
pub fn load_vector(mesh: &Mesh, segments: &SegmentedCrack, crack: &CrackGraph, source: &ScalarFn) -> Vec<f64> {
    let mut b = vec![0.0; mesh.num_vertices()];
    let fv: Vec<f64> = mesh.vertices().iter().map(|p| source(p)).collect();
    for t in 0..mesh.num_triangles() {
        let third = geom::signed_area(&mesh.triangle_points(t)) / 3.0;
        for v in mesh.triangles()[t] {
            b[v] += fv[v] * third;
        }
    }
    for s in &segments.segments {
        let f_gamma = crack.chains()[s.chain].f_gamma;
        if f_gamma == 0.0 {
            continue;
        }
        let tri = mesh.triangle_points(s.triangle);
        let lambda = geom::barycentric(&tri, &s.midpoint());
        for (k, v) in mesh.triangles()[s.triangle].into_iter().enumerate() {
            b[v] += f_gamma * s.length * lambda[k];
        }
    }
    b
}

/// Which side of a closed crack a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `Ω_1`, outside the crack.
    Outer,
    /// `Ω_2`, enclosed by the crack.
    Enclosed,
}

pub type RegionFn = Arc<dyn Fn(&Point) -> Region + Send + Sync>;

/// Bulk coefficients: `a = a1` on `Ω_1`, `a2` on `Ω_2`, and the source `f`.
#[derive(Clone)]
pub struct Coefficients {
    pub a1: f64,
    pub a2: f64,
    pub source: ScalarFn,
    /// Overrides the default classification by the sign of the distance to
    /// a closed crack. Only consulted when `a1 != a2`.
    pub region: Option<RegionFn>,
}

impl Coefficients {
    pub fn uniform(a: f64, source: ScalarFn) -> Self {
        Self {
            a1: a,
            a2: a,
            source,
            region: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a1 > 0.0 && self.a2 > 0.0) || !self.a1.is_finite() || !self.a2.is_finite() {
            return Err(Error::Config(format!(
                "bulk permeabilities must be positive, got a1 = {}, a2 = {}",
                self.a1, self.a2
            )));
        }
        Ok(())
    }

    /// Per-triangle permeability. Triangles are classified at their
    /// centroid, so a triangle cut by the crack takes the value of the side
    /// holding its centroid.
    pub fn bulk_permeability(&self, mesh: &Mesh, crack: &CrackGraph) -> Result<Vec<f64>> {
        self.validate()?;
        if self.a1 == self.a2 {
            return Ok(vec![self.a1; mesh.num_triangles()]);
        }
        let classify: RegionFn = match &self.region {
            Some(f) => f.clone(),
            None => {
                if !matches!(crack.chains(), [c] if c.is_closed()) {
                    return Err(Error::Config(
                        "a1 != a2 needs a single closed crack chain or an explicit region classifier".into(),
                    ));
                }
                let crack = crack.clone();
                Arc::new(move |x| {
                    if signed_distance_to_crack(x, &crack) > 0.0 {
                        Region::Enclosed
                    } else {
                        Region::Outer
                    }
                })
            }
        };
        Ok((0..mesh.num_triangles())
            .into_par_iter()
            .map(|t| match classify(&geom::centroid(&mesh.triangle_points(t))) {
                Region::Outer => self.a1,
                Region::Enclosed => self.a2,
            })
            .collect())
    }
}

#[derive(Clone)]
pub enum BoundaryCondition {
    Dirichlet(ScalarFn),
    /// Homogeneous Neumann (no flux).
    Neumann,
}

/// Boundary condition per side; sides not listed are homogeneous Neumann.
#[derive(Clone, Default)]
pub struct BoundarySpec {
    pub sides: BTreeMap<BoundaryTag, BoundaryCondition>,
}

impl BoundarySpec {
    pub fn dirichlet_everywhere(g: ScalarFn) -> Self {
        let sides = BoundaryTag::ALL
            .into_iter()
            .map(|t| (t, BoundaryCondition::Dirichlet(g.clone())))
            .collect();
        Self { sides }
    }

    pub fn with(mut self, tag: BoundaryTag, bc: BoundaryCondition) -> Self {
        self.sides.insert(tag, bc);
        self
    }

    pub fn has_dirichlet(&self) -> bool {
        self.sides.values().any(|c| matches!(c, BoundaryCondition::Dirichlet(_)))
    }

    /// Constrained vertices with their nodal Dirichlet values, sorted. A
    /// vertex on several Dirichlet sides takes the first side in
    /// left/right/bottom/top order.
    pub fn constrained_vertices(&self, mesh: &Mesh) -> Vec<(usize, f64)> {
        let mut value: Vec<Option<f64>> = vec![None; mesh.num_vertices()];
        for tag in BoundaryTag::ALL {
            let Some(BoundaryCondition::Dirichlet(g)) = self.sides.get(&tag) else {
                continue;
            };
            for e in mesh.boundary().iter().filter(|e| e.tag == tag) {
                for v in e.vertices {
                    if value[v].is_none() {
                        value[v] = Some(g(&mesh.vertices()[v]));
                    }
                }
            }
        }
        value.into_iter().enumerate().filter_map(|(v, g)| g.map(|g| (v, g))).collect()
    }
}

/// Assembled system for `A(u_h, v) = L(v)`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    /// `K` before boundary conditions.
    pub stiffness: CsrMatrix,
    /// `b` before boundary conditions.
    pub load: Vec<f64>,
    /// `K` after symmetric Dirichlet elimination (identity rows and columns
    /// at constrained vertices).
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub constrained: Vec<(usize, f64)>,
    /// Vertex positions, used to order the direct solver. May be empty.
    pub coordinates: Vec<Point>,
}

impl LinearSystem {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn free_mask(&self) -> Vec<bool> {
        let mut free = vec![true; self.n()];
        for &(v, _) in &self.constrained {
            free[v] = false;
        }
        free
    }

    /// Free-vertex block of the eliminated matrix and its right-hand side.
    pub fn reduced(&self) -> (CsrMatrix, Vec<f64>, Vec<usize>) {
        let free = self.free_mask();
        let map: Vec<usize> = (0..self.n()).filter(|&i| free[i]).collect();
        let mut inv = vec![usize::MAX; self.n()];
        for (k, &i) in map.iter().enumerate() {
            inv[i] = k;
        }
        let neighbors: Vec<Vec<usize>> = map
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                self.matrix
                    .row(i)
                    .0
                    .iter()
                    .filter(|&&j| free[j])
                    .map(|&j| inv[j])
                    .filter(|&j| j != k)
                    .collect()
            })
            .collect();
        let mut m = CsrMatrix::from_neighbors(&neighbors);
        for (k, &i) in map.iter().enumerate() {
            let (cols, vals) = self.matrix.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if free[j] {
                    m.set(k, inv[j], v);
                }
            }
        }
        let rhs = map.iter().map(|&i| self.rhs[i]).collect();
        (m, rhs, map)
    }
}

fn local_bulk(mesh: &Mesh, bulk_a: &[f64], t: usize) -> Result<[[f64; 3]; 3]> {
    bulk_element_matrix(&mesh.triangle_points(t), bulk_a[t]).map_err(|e| match e {
        Error::DegenerateTriangle { area, .. } => Error::DegenerateTriangle { triangle: t, area },
        e => e,
    })
}

fn local_interface(mesh: &Mesh, segments: &SegmentedCrack, crack: &CrackGraph, k: usize) -> Result<Option<[[f64; 3]; 3]>> {
    let s = &segments.segments[k];
    let a_gamma = crack.chains()[s.chain].a_gamma;
    if a_gamma == 0.0 {
        return Ok(None);
    }
    interface_segment_matrix(&s.start, &s.end, &mesh.triangle_points(s.triangle), a_gamma)
        .map(Some)
        .map_err(|_| Error::SegmentTriangleMismatch(s.triangle))
}

/// Bulk plus interface stiffness, assembled serially in element order and
/// then segment order. Chains with `a_Γ = 0` contribute nothing.
pub fn stiffness_matrix_serial(mesh: &Mesh, segments: &SegmentedCrack, crack: &CrackGraph, bulk_a: &[f64]) -> Result<CsrMatrix> {
    let mut k = CsrMatrix::from_neighbors(&mesh.vertex_neighbors());
    for t in 0..mesh.num_triangles() {
        k.scatter(&mesh.triangles()[t], &local_bulk(mesh, bulk_a, t)?);
    }
    for i in 0..segments.len() {
        if let Some(local) = local_interface(mesh, segments, crack, i)? {
            k.scatter(&mesh.triangles()[segments.segments[i].triangle], &local);
        }
    }
    Ok(k)
}

/// Same as [`stiffness_matrix_serial`] with the element matrices computed in
/// parallel; the scatter runs in the same order, so the result is identical.
pub fn stiffness_matrix(mesh: &Mesh, segments: &SegmentedCrack, crack: &CrackGraph, bulk_a: &[f64]) -> Result<CsrMatrix> {
    let bulk: Vec<[[f64; 3]; 3]> = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| local_bulk(mesh, bulk_a, t))
        .collect::<Result<_>>()?;
    let iface: Vec<Option<[[f64; 3]; 3]>> = (0..segments.len())
        .into_par_iter()
        .map(|i| local_interface(mesh, segments, crack, i))
        .collect::<Result<_>>()?;
    let mut k = CsrMatrix::from_neighbors(&mesh.vertex_neighbors());
    for (t, local) in bulk.iter().enumerate() {
        k.scatter(&mesh.triangles()[t], local);
    }
    for (s, local) in segments.segments.iter().zip(&iface) {
        if let Some(local) = local {
            k.scatter(&mesh.triangles()[s.triangle], local);
        }
    }
    Ok(k)
}

/// Assembles the system and eliminates Dirichlet vertices symmetrically:
/// known columns move to the right-hand side, constrained rows and columns
/// become identity.
pub fn assemble(
    mesh: &Mesh,
    segments: &SegmentedCrack,
    crack: &CrackGraph,
    coefficients: &Coefficients,
    boundary: &BoundarySpec,
) -> Result<LinearSystem> {
    if !boundary.has_dirichlet() {
        return Err(Error::NoDirichlet);
    }
    let constrained = boundary.constrained_vertices(mesh);
    if constrained.is_empty() {
        return Err(Error::NoDirichlet);
    }
    let bulk_a = coefficients.bulk_permeability(mesh, crack)?;
    let stiffness = stiffness_matrix(mesh, segments, crack, &bulk_a)?;
    let load = load_vector(mesh, segments, crack, &coefficients.source);

    let mut fixed: Vec<Option<f64>> = vec![None; mesh.num_vertices()];
    for &(v, g) in &constrained {
        fixed[v] = Some(g);
    }
    let mut matrix = stiffness.clone();
    let mut rhs = load.clone();
    for i in 0..mesh.num_vertices() {
        let cols: Vec<usize> = matrix.row(i).0.to_vec();
        match fixed[i] {
            Some(g) => {
                for j in cols {
                    matrix.set(i, j, if i == j { 1.0 } else { 0.0 });
                }
                rhs[i] = g;
            }
            None => {
                for j in cols {
                    if let Some(g) = fixed[j] {
                        rhs[i] -= matrix.get(i, j) * g;
                        matrix.set(i, j, 0.0);
                    }
                }
            }
        }
    }
    Ok(LinearSystem {
        stiffness,
        load,
        matrix,
        rhs,
        constrained,
        coordinates: mesh.vertices().to_vec(),
    })
}
