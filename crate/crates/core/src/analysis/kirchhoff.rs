use crate::crack::{CrackGraph, CrackSegment, SegmentedCrack};
use crate::geom::{self, Point};
use crate::mesh::Mesh;
use crate::solve::SolutionField;

/// Which crack segment supplies a chain's tangential derivative at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TangentSampling {
    /// The segment touching the node.
    Touching,
    /// The segment nearest the node whose triangle does not contain it.
    /// Falls back to the touching segment for chains inside one triangle.
    Detached,
    /// Length-weighted mean over the segments within a window of
    /// `WINDOW` local mesh sizes, starting at the first detached segment.
    #[default]
    Window,
}

const WINDOW: f64 = 4.0;

/// Tangential flux balance at one crack-graph node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeBalance {
    pub node: usize,
    /// Number of chain ends meeting at the node.
    pub degree: usize,
    /// `Σ_j a_Γj t_j · ∇u_h`, with `t_j` the exterior unit tangent of chain
    /// `j` at the node.
    pub imbalance: f64,
    /// `Σ_j |a_Γj t_j · ∇u_h|`.
    pub flux_magnitude: f64,
}

fn contains(mesh: &Mesh, t: usize, x: &Point) -> bool {
    let tri = mesh.triangle_points(t);
    let tol = 1e-12;
    geom::barycentric(&tri, x).iter().all(|&l| l >= -tol)
}

/// Discrete Kirchhoff residual per graph node, sampled with
/// [`TangentSampling::Window`]. Tips (degree 1) carry the natural condition
/// `t · a_Γ ∇u = 0`. The condition is natural in the weak form, so the
/// imbalance only vanishes in the limit.
pub fn kirchhoff_residual(u_h: &SolutionField, mesh: &Mesh, crack: &CrackGraph, segments: &SegmentedCrack) -> Vec<NodeBalance> {
    kirchhoff_residual_with(u_h, mesh, crack, segments, TangentSampling::default())
}

/// Sum of `|imbalance|` over all nodes.
pub fn total_imbalance(balances: &[NodeBalance]) -> f64 {
    balances.iter().map(|b| b.imbalance.abs()).sum()
}

/// Per-node residual with an explicit choice of derivative sample.
pub fn kirchhoff_residual_with(
    u_h: &SolutionField,
    mesh: &Mesh,
    crack: &CrackGraph,
    segments: &SegmentedCrack,
    sampling: TangentSampling,
) -> Vec<NodeBalance> {
    let mut per_chain: Vec<Vec<&CrackSegment>> = vec![Vec::new(); crack.chains().len()];
    for s in &segments.segments {
        per_chain[s.chain].push(s);
    }
    // Tangential derivative of u_h along the chain direction of `segs`.
    let derivative = |segs: &mut dyn Iterator<Item = &CrackSegment>, node: &Point| -> Option<f64> {
        let mut first = None;
        let mut h_local = 0.0;
        let (mut weighted, mut length) = (0.0, 0.0);
        for s in segs {
            let d = s.tangent().dot(&u_h.gradient(mesh, s.triangle));
            if first.is_none() {
                first = Some(d);
                h_local = mesh.diameter(s.triangle);
            }
            let attached = contains(mesh, s.triangle, node);
            match sampling {
                TangentSampling::Touching => break,
                TangentSampling::Detached if !attached => return Some(d),
                TangentSampling::Window if !attached || length > 0.0 => {
                    weighted += d * s.length;
                    length += s.length;
                    if length >= WINDOW * h_local {
                        break;
                    }
                }
                _ => {}
            }
        }
        if length > 0.0 {
            Some(weighted / length)
        } else {
            first
        }
    };
    (0..crack.nodes().len())
        .map(|i| {
            let x = crack.nodes()[i];
            let mut imbalance = 0.0;
            let mut flux_magnitude = 0.0;
            let mut degree = 0;
            for &j in crack.incident_chains(i) {
                let chain = &crack.chains()[j];
                let segs = &per_chain[j];
                let ends = [
                    (chain.nodes[0] == i, -1.0, derivative(&mut segs.iter().copied(), &x)),
                    (chain.nodes[1] == i, 1.0, derivative(&mut segs.iter().rev().copied(), &x)),
                ];
                for (at_node, sign, d) in ends {
                    let (true, Some(d)) = (at_node, d) else {
                        continue;
                    };
                    let flux = chain.a_gamma * sign * d;
                    imbalance += flux;
                    flux_magnitude += flux.abs();
                    degree += 1;
                }
            }
            NodeBalance {
                node: i,
                degree,
                imbalance,
                flux_magnitude,
            }
        })
        .collect()
}
