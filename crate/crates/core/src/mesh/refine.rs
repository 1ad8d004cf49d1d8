//! Newest-vertex bisection with conforming closure.

use std::collections::HashMap;

use crate::crack::{CrackGraph, CrackIndex};
use crate::geom::{self, Point};
use crate::{Error, Result};

use super::{edge_key, BoundaryEdge, Mesh};

const NONE: usize = usize::MAX;

/// How the interface-local mesh size `h_Γ` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaRule {
    /// No interface refinement.
    None,
    /// A prescribed `h_Γ`.
    Fixed(f64),
    /// `h_Γ = c · h² / L` with `L` the domain diameter, i.e. `h_Γ/L = c (h/L)²`.
    Quadratic { c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementConfig {
    /// Bulk mesh size `h`.
    pub global_h: f64,
    pub gamma_rule: GammaRule,
    /// Cap on the number of bisection rounds.
    pub max_generations: usize,
}

impl RefinementConfig {
    pub fn new(global_h: f64, gamma_rule: GammaRule, max_generations: usize) -> Result<Self> {
        let cfg = Self {
            global_h,
            gamma_rule,
            max_generations,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.global_h > 0.0 && self.global_h.is_finite()) {
            return Err(Error::Config(format!("global_h must be positive, got {}", self.global_h)));
        }
        match self.gamma_rule {
            GammaRule::Fixed(h) if !(h > 0.0 && h.is_finite()) => {
                Err(Error::Config(format!("fixed h_gamma must be positive, got {h}")))
            }
            GammaRule::Quadratic { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::Config(format!("quadratic constant must be positive, got {c}")))
            }
            _ => Ok(()),
        }
    }

    /// Interface-local target size for a domain of the given diameter.
    pub fn target_h_gamma(&self, length_scale: f64) -> Option<f64> {
        match self.gamma_rule {
            GammaRule::None => None,
            GammaRule::Fixed(h) => Some(h),
            GammaRule::Quadratic { c } => Some(c * self.global_h * self.global_h / length_scale),
        }
    }
}

/// Mutable triangulation supporting conforming newest-vertex bisection.
///
/// Triangle slots are stable: bisecting slot `t` stores one child back in `t`
/// and appends the other. Every slot carries a stamp that changes when the
/// slot is overwritten, and a flag that children inherit from their parent.
pub struct Refiner {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    stamps: Vec<u32>,
    flags: Vec<bool>,
    edges: HashMap<(usize, usize), [usize; 2]>,
    boundary: Vec<BoundaryEdge>,
    boundary_index: HashMap<(usize, usize), usize>,
    touched: Vec<usize>,
}

impl Refiner {
    pub fn new(mesh: &Mesh) -> Self {
        let mut r = Self {
            vertices: mesh.vertices.clone(),
            triangles: mesh.triangles.clone(),
            stamps: vec![0; mesh.triangles.len()],
            flags: vec![false; mesh.triangles.len()],
            edges: HashMap::with_capacity(mesh.triangles.len() * 2),
            boundary: mesh.boundary.clone(),
            boundary_index: HashMap::with_capacity(mesh.boundary.len()),
            touched: Vec::new(),
        };
        for t in 0..r.triangles.len() {
            let [a, b, c] = r.triangles[t];
            r.link(a, b, t);
            r.link(b, c, t);
            r.link(c, a, t);
        }
        for (k, e) in r.boundary.iter().enumerate() {
            r.boundary_index.insert(edge_key(e.vertices[0], e.vertices[1]), k);
        }
        r
    }

    pub fn into_mesh(self) -> Mesh {
        Mesh {
            vertices: self.vertices,
            triangles: self.triangles,
            boundary: self.boundary,
        }
    }

    /// Snapshot of the current state.
    pub fn to_mesh(&self) -> Mesh {
        Mesh {
            vertices: self.vertices.clone(),
            triangles: self.triangles.clone(),
            boundary: self.boundary.clone(),
        }
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn stamp(&self, t: usize) -> u32 {
        self.stamps[t]
    }

    pub fn flag(&self, t: usize) -> bool {
        self.flags[t]
    }

    pub fn set_flag(&mut self, t: usize, value: bool) {
        self.flags[t] = value;
    }

    /// Slots written since the last call, in write order (may repeat).
    pub fn take_touched(&mut self) -> Vec<usize> {
        std::mem::take(&mut self.touched)
    }

    fn link(&mut self, a: usize, b: usize, t: usize) {
        let e = self.edges.entry(edge_key(a, b)).or_insert([NONE, NONE]);
        if e[0] == NONE {
            e[0] = t;
        } else {
            debug_assert_eq!(e[1], NONE, "edge with more than two triangles");
            e[1] = t;
        }
    }

    fn unlink(&mut self, a: usize, b: usize, t: usize) {
        let key = edge_key(a, b);
        let e = self.edges.get_mut(&key).expect("edge present");
        if e[0] == t {
            e[0] = e[1];
            e[1] = NONE;
        } else {
            debug_assert_eq!(e[1], t);
            e[1] = NONE;
        }
        if e[0] == NONE {
            self.edges.remove(&key);
        }
    }

    fn neighbor(&self, t: usize, a: usize, b: usize) -> Option<usize> {
        let e = self.edges.get(&edge_key(a, b))?;
        let other = if e[0] == t { e[1] } else { e[0] };
        (other != NONE).then_some(other)
    }

    /// Splits slot `t` at vertex `m` on its refinement edge.
    fn split(&mut self, t: usize, m: usize) {
        let [p1, p2, p3] = self.triangles[t];
        self.unlink(p1, p2, t);
        self.unlink(p2, p3, t);
        self.unlink(p3, p1, t);
        let s = self.triangles.len();
        self.triangles[t] = [m, p1, p2];
        self.triangles.push([m, p3, p1]);
        self.stamps[t] = self.stamps[t].wrapping_add(1);
        self.stamps.push(0);
        let flag = self.flags[t];
        self.flags.push(flag);
        self.link(m, p1, t);
        self.link(p1, p2, t);
        self.link(p2, m, t);
        self.link(m, p3, s);
        self.link(p3, p1, s);
        self.link(p1, m, s);
        self.touched.push(t);
        self.touched.push(s);
    }

    /// Bisects `t` (and its partner across the refinement edge, if any).
    fn bisect_step(&mut self, t: usize, partner: Option<usize>) {
        let [_, a, b] = self.triangles[t];
        let m = self.vertices.len();
        self.vertices.push(Point::from((self.vertices[a].coords + self.vertices[b].coords) * 0.5));
        self.split(t, m);
        match partner {
            Some(n) => self.split(n, m),
            None => {
                if let Some(k) = self.boundary_index.remove(&edge_key(a, b)) {
                    let [u, v] = self.boundary[k].vertices;
                    let tag = self.boundary[k].tag;
                    self.boundary[k].vertices = [u, m];
                    self.boundary_index.insert(edge_key(u, m), k);
                    self.boundary_index.insert(edge_key(m, v), self.boundary.len());
                    self.boundary.push(BoundaryEdge { vertices: [m, v], tag });
                }
            }
        }
    }

    /// Bisects slot `t` once, first refining neighbours as needed so that the
    /// mesh stays conforming. `observe` runs after every atomic step (one
    /// triangle on the boundary, or a compatible pair sharing a refinement
    /// edge); the mesh is conforming at each of those points.
    pub fn refine_element_observed(&mut self, t: usize, observe: &mut dyn FnMut(&Refiner)) {
        let mut stack = vec![(t, self.stamps[t])];
        while let Some(&(s, stamp)) = stack.last() {
            if self.stamps[s] != stamp {
                stack.pop();
                continue;
            }
            let [_, a, b] = self.triangles[s];
            match self.neighbor(s, a, b) {
                None => {
                    self.bisect_step(s, None);
                    observe(self);
                    stack.pop();
                }
                Some(n) => {
                    let [_, c, d] = self.triangles[n];
                    if edge_key(c, d) == edge_key(a, b) {
                        self.bisect_step(s, Some(n));
                        observe(self);
                        stack.pop();
                    } else {
                        stack.push((n, self.stamps[n]));
                    }
                }
            }
        }
    }

    pub fn refine_element(&mut self, t: usize) {
        self.refine_element_observed(t, &mut |_| {});
    }
}

/// Bisects every listed triangle of `mesh` once (with conforming closure).
pub fn bisect_marked(mesh: &Mesh, marked: &[usize]) -> Mesh {
    let mut r = Refiner::new(mesh);
    let targets: Vec<(usize, u32)> = marked.iter().map(|&t| (t, 0)).collect();
    for (t, stamp) in targets {
        if r.stamp(t) == stamp {
            r.refine_element(t);
        }
    }
    r.into_mesh()
}

/// Refines `mesh` until every triangle meeting the crack, and every triangle
/// sharing a vertex with one, has diameter at most `h_Γ`.
///
/// Existing vertices never move. Running it again with the same
/// configuration leaves the mesh unchanged.
pub fn refine_near_crack(mesh: &Mesh, crack: &CrackGraph, config: &RefinementConfig) -> Result<Mesh> {
    config.validate()?;
    let Some(h_gamma) = config.target_h_gamma(mesh.domain_diameter()) else {
        return Ok(mesh.clone());
    };
    let tol = mesh.geometric_tolerance();
    let index = CrackIndex::new(crack, tol);
    let limit = h_gamma * (1.0 + 1e-12);

    let mut r = Refiner::new(mesh);
    for t in 0..r.num_triangles() {
        let hit = index.intersects(&r.triangle_points(t));
        r.set_flag(t, hit);
    }

    for generation in 0..=config.max_generations {
        let mut near = vec![false; r.num_vertices()];
        for t in 0..r.num_triangles() {
            if r.flag(t) {
                for v in r.triangle(t) {
                    near[v] = true;
                }
            }
        }
        let targets: Vec<(usize, u32)> = (0..r.num_triangles())
            .filter(|&t| {
                r.triangle(t).iter().any(|&v| near[v]) && geom::diameter(&r.triangle_points(t)) > limit
            })
            .map(|t| (t, r.stamp(t)))
            .collect();
        if targets.is_empty() {
            return Ok(r.into_mesh());
        }
        if generation == config.max_generations {
            let worst = targets
                .iter()
                .map(|&(t, _)| geom::diameter(&r.triangle_points(t)))
                .fold(0.0, f64::max);
            return Err(Error::RefinementLimit {
                target: h_gamma,
                generations: config.max_generations,
                worst,
            });
        }
        for (t, stamp) in targets {
            if r.stamp(t) == stamp {
                r.refine_element(t);
            }
        }
        // Children inherit the parent's flag; only flagged slots can still
        // meet the crack.
        let mut touched = r.take_touched();
        touched.sort_unstable();
        touched.dedup();
        for t in touched {
            if r.flag(t) {
                let hit = index.intersects(&r.triangle_points(t));
                r.set_flag(t, hit);
            }
        }
    }
    unreachable!("loop returns on the last generation")
}
