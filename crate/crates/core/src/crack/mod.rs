//! Crack networks: a graph of nodes joined by polygonal chains.
//!
//! A [`CrackSpec`] is the declarative description (nodes plus chain
//! primitives) that lives in problem files. Sampling it at a spacing gives a
//! [`CrackGraph`] of polylines, which [`cut_chains`] splits at every element
//! side so each piece lies inside one triangle.

mod curve;
mod cut;
mod distance;
mod intersect;

pub use curve::{sample_curve, ArcCurve, BezierCurve, LineCurve, ParametricCurve};
pub use cut::{cut_chains, CrackSegment, SegmentedCrack};
pub use distance::signed_distance_to_crack;
pub use intersect::{clip_segment, segment_triangle_intersection, CrackIndex};

use serde::{Deserialize, Serialize};

use crate::geom::{Aabb, Point};
use crate::{Error, Result};

/// Geometry of one chain between its two graph nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChainShape {
    /// Straight segment between the nodes.
    Segment,
    /// Polyline through the given interior points.
    Polyline { points: Vec<[f64; 2]> },
    /// Circular arc around `center` from the first to the second node.
    /// Counterclockwise unless `clockwise`; the radius is interpolated
    /// linearly if the nodes are at different distances from the center.
    Arc {
        center: [f64; 2],
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        clockwise: bool,
    },
    /// Closed circle around `center` through the (single) node.
    Circle {
        center: [f64; 2],
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        clockwise: bool,
    },
    /// Bézier curve with the nodes as end points and these interior controls.
    Bezier { controls: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    #[serde(flatten)]
    pub shape: ChainShape,
    /// Start and end node; equal for a circle.
    pub nodes: [usize; 2],
    /// Tangential permeability `a_Γ`.
    #[serde(default = "one")]
    pub a_gamma: f64,
    /// Line source `f_Γ`.
    #[serde(default)]
    pub f_gamma: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CrackSpec {
    #[serde(default)]
    pub nodes: Vec<[f64; 2]>,
    #[serde(default)]
    pub chains: Vec<ChainSpec>,
}

impl CrackSpec {
    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Samples every chain with parts no longer than `spacing`.
    pub fn build(&self, spacing: f64) -> Result<CrackGraph> {
        let nodes: Vec<Point> = self.nodes.iter().map(|&[x, y]| Point::new(x, y)).collect();
        let mut chains = Vec::with_capacity(self.chains.len());
        for (j, spec) in self.chains.iter().enumerate() {
            let [i0, i1] = spec.nodes;
            if i0 >= nodes.len() || i1 >= nodes.len() {
                return Err(Error::InvalidCrack(format!("chain {j} references a missing node")));
            }
            let (start, end) = (nodes[i0], nodes[i1]);
            let closed = matches!(spec.shape, ChainShape::Circle { .. });
            if closed != (i0 == i1) {
                return Err(Error::InvalidCrack(format!(
                    "chain {j}: only circles may start and end at the same node"
                )));
            }
            let mut points = match &spec.shape {
                ChainShape::Segment => sample_curve(&LineCurve { start, end }, spacing)?,
                ChainShape::Polyline { points } => {
                    let mut corners = vec![start];
                    corners.extend(points.iter().map(|&[x, y]| Point::new(x, y)));
                    corners.push(end);
                    let mut out = vec![start];
                    for w in corners.windows(2) {
                        let leg = sample_curve(&LineCurve { start: w[0], end: w[1] }, spacing)?;
                        out.extend_from_slice(&leg[1..]);
                    }
                    out
                }
                ChainShape::Arc { center, clockwise } | ChainShape::Circle { center, clockwise } => {
                    let c = Point::new(center[0], center[1]);
                    if (start - c).norm() == 0.0 || (end - c).norm() == 0.0 {
                        return Err(Error::InvalidCrack(format!("chain {j}: node at the arc center")));
                    }
                    sample_curve(&ArcCurve::between(c, start, end, *clockwise), spacing)?
                }
                ChainShape::Bezier { controls } => {
                    let mut pts = vec![start];
                    pts.extend(controls.iter().map(|&[x, y]| Point::new(x, y)));
                    pts.push(end);
                    sample_curve(&BezierCurve { controls: pts }, spacing)?
                }
            };
            // End points are the graph nodes exactly.
            let last = points.len() - 1;
            points[0] = start;
            points[last] = end;
            chains.push(Chain {
                nodes: spec.nodes,
                points,
                a_gamma: spec.a_gamma,
                f_gamma: spec.f_gamma,
            });
        }
        CrackGraph::new(nodes, chains)
    }
}

/// One edge `Γ_j` of the crack graph as a polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub nodes: [usize; 2],
    pub points: Vec<Point>,
    pub a_gamma: f64,
    pub f_gamma: f64,
}

impl Chain {
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    pub fn num_pieces(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_closed(&self) -> bool {
        self.nodes[0] == self.nodes[1]
    }
}

/// Crack graph with nodes `x_i` and polyline chains `Γ_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrackGraph {
    nodes: Vec<Point>,
    chains: Vec<Chain>,
    incident: Vec<Vec<usize>>,
}

impl CrackGraph {
    pub fn new(nodes: Vec<Point>, chains: Vec<Chain>) -> Result<Self> {
        let scale = Aabb::from_points(nodes.iter().chain(chains.iter().flat_map(|c| &c.points)))
            .diagonal()
            .max(f64::MIN_POSITIVE);
        let tol = 1e-12 * scale;
        let mut incident = vec![Vec::new(); nodes.len()];
        for (j, c) in chains.iter().enumerate() {
            if c.points.len() < 2 {
                return Err(Error::InvalidCrack(format!("chain {j} has fewer than two points")));
            }
            if c.points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
                return Err(Error::InvalidCrack(format!("chain {j} has a non-finite point")));
            }
            if let Some(k) = c.points.windows(2).position(|w| (w[1] - w[0]).norm() <= tol) {
                return Err(Error::InvalidCrack(format!("chain {j} repeats point {k}")));
            }
            for (end, &i) in [c.points[0], *c.points.last().unwrap()].iter().zip(&c.nodes) {
                let node = nodes
                    .get(i)
                    .ok_or_else(|| Error::InvalidCrack(format!("chain {j} references missing node {i}")))?;
                if (end - node).norm() > tol {
                    return Err(Error::InvalidCrack(format!("chain {j} does not end at node {i}")));
                }
            }
            if !(c.a_gamma >= 0.0) || !c.f_gamma.is_finite() {
                return Err(Error::InvalidCrack(format!("chain {j} has invalid coefficients")));
            }
            incident[c.nodes[0]].push(j);
            if c.nodes[1] != c.nodes[0] {
                incident[c.nodes[1]].push(j);
            }
        }
        Ok(Self {
            nodes,
            chains,
            incident,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    /// `I_N(j)`: the end nodes of chain `j`.
    pub fn chain_nodes(&self, j: usize) -> [usize; 2] {
        self.chains[j].nodes
    }

    /// `I_G(i)`: chains having node `i` as an end point.
    pub fn incident_chains(&self, i: usize) -> &[usize] {
        &self.incident[i]
    }

    pub fn total_length(&self) -> f64 {
        self.chains.iter().map(Chain::length).sum()
    }

    /// All polyline pieces as `(chain, piece, start, end)`.
    pub fn pieces(&self) -> impl Iterator<Item = (usize, usize, Point, Point)> + '_ {
        self.chains.iter().enumerate().flat_map(|(j, c)| {
            c.points.windows(2).enumerate().map(move |(k, w)| (j, k, w[0], w[1]))
        })
    }

    /// Same graph with every `a_Γ` replaced.
    pub fn with_permeability(&self, a_gamma: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.chains {
            c.a_gamma = a_gamma;
        }
        out
    }
}
