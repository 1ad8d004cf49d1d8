use std::fmt::Write as _;

use rayon::prelude::*;

use crate::crack::{CrackGraph, SegmentedCrack};
use crate::geom::{self, Point};
use crate::mesh::Mesh;
use crate::solve::SolutionField;

use super::ExactSolution;

/// Quadrature used for the error integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Edge midpoints on triangles (exact for quadratics), 2-point Gauss on
    /// crack segments. Overestimates the L² error of a P1 interpolant by
    /// roughly a tenth.
    Standard,
    /// 6-point degree-4 rule on triangles, 3-point Gauss on segments.
    #[default]
    High,
}

// (barycentric, weight) with weights summing to one.
const EDGE_MIDPOINTS: [([f64; 3], f64); 3] = [
    ([0.5, 0.5, 0.0], 1.0 / 3.0),
    ([0.0, 0.5, 0.5], 1.0 / 3.0),
    ([0.5, 0.0, 0.5], 1.0 / 3.0),
];

const A1: f64 = 0.445948490915965;
const B1: f64 = 1.0 - 2.0 * A1;
const W1: f64 = 0.223381589678011;
const A2: f64 = 0.091576213509771;
const B2: f64 = 1.0 - 2.0 * A2;
const W2: f64 = 0.109951743655322;
const DEGREE4: [([f64; 3], f64); 6] = [
    ([A1, A1, B1], W1),
    ([A1, B1, A1], W1),
    ([B1, A1, A1], W1),
    ([A2, A2, B2], W2),
    ([A2, B2, A2], W2),
    ([B2, A2, A2], W2),
];

// (position in [0, 1], weight) with weights summing to one.
fn gauss_line(rule: Quadrature) -> &'static [(f64, f64)] {
    const G2: [(f64, f64); 2] = [(0.211324865405187_1, 0.5), (0.788675134594812_9, 0.5)];
    const G3: [(f64, f64); 3] = [
        (0.112701665379258_3, 5.0 / 18.0),
        (0.5, 8.0 / 18.0),
        (0.887298334620741_7, 5.0 / 18.0),
    ];
    match rule {
        Quadrature::Standard => &G2,
        Quadrature::High => &G3,
    }
}

/// Error of `u_h` against an exact solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms {
    /// `‖u - u_h‖_Ω`.
    pub l2: f64,
    /// `‖∇(u - u_h)‖_Ω`.
    pub h1_semi: f64,
    /// `‖u - u_h‖_Γ`.
    pub l2_gamma: f64,
    /// `|||u - u_h|||`, the norm induced by `A`.
    pub energy: f64,
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub level: usize,
    pub h: f64,
    pub h_gamma: f64,
    pub n_dofs: usize,
    pub errors: ErrorNorms,
}

pub const CSV_HEADER: &str = "level,h,h_gamma,n_dofs,l2,h1_semi,l2_gamma,energy";

pub fn write_reports_csv(reports: &[NormReport]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in reports {
        let e = &r.errors;
        let _ = writeln!(
            s,
            "{},{:e},{:e},{},{:e},{:e},{:e},{:e}",
            r.level, r.h, r.h_gamma, r.n_dofs, e.l2, e.h1_semi, e.l2_gamma, e.energy
        );
    }
    s
}

/// Bulk and interface error norms. The exact solution is evaluated pointwise
/// at each quadrature point, so triangles straddling a kink of `u` are not
/// subdivided.
pub fn error_norms(
    mesh: &Mesh,
    segments: &SegmentedCrack,
    crack: &CrackGraph,
    bulk_a: &[f64],
    u_h: &SolutionField,
    exact: &dyn ExactSolution,
    rule: Quadrature,
) -> ErrorNorms {
    let points: &[([f64; 3], f64)] = match rule {
        Quadrature::Standard => &EDGE_MIDPOINTS,
        Quadrature::High => &DEGREE4,
    };
    let bulk: Vec<[f64; 3]> = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let tri = mesh.triangle_points(t);
            let area = geom::signed_area(&tri);
            let [a, b, c] = mesh.triangles()[t];
            let nodal = [u_h.values[a], u_h.values[b], u_h.values[c]];
            let grad_h = u_h.gradient(mesh, t);
            let (mut l2, mut h1) = (0.0, 0.0);
            for (lambda, w) in points {
                let x = Point::from(tri[0].coords * lambda[0] + tri[1].coords * lambda[1] + tri[2].coords * lambda[2]);
                let uh = nodal[0] * lambda[0] + nodal[1] * lambda[1] + nodal[2] * lambda[2];
                let e = uh - exact.value(&x);
                let g = grad_h - exact.gradient(&x);
                l2 += w * area * e * e;
                h1 += w * area * g.norm_squared();
            }
            [l2, h1, bulk_a[t] * h1]
        })
        .collect();
    let line = gauss_line(rule);
    let iface: Vec<[f64; 2]> = segments
        .segments
        .par_iter()
        .map(|s| {
            let t = s.tangent();
            let grad_h = u_h.gradient(mesh, s.triangle);
            let a_gamma = crack.chains()[s.chain].a_gamma;
            let (mut l2, mut en) = (0.0, 0.0);
            for &(xi, w) in line {
                let x = s.start + (s.end - s.start) * xi;
                let e = u_h.value_in(mesh, s.triangle, &x) - exact.value(&x);
                let d = t.dot(&(grad_h - exact.gradient(&x)));
                l2 += w * s.length * e * e;
                en += w * s.length * a_gamma * d * d;
            }
            [l2, en]
        })
        .collect();

    let (mut l2, mut h1, mut energy, mut l2_gamma) = (0.0, 0.0, 0.0, 0.0);
    for [a, b, c] in bulk {
        l2 += a;
        h1 += b;
        energy += c;
    }
    for [a, b] in iface {
        l2_gamma += a;
        energy += b;
    }
    ErrorNorms {
        l2: l2.sqrt(),
        h1_semi: h1.sqrt(),
        l2_gamma: l2_gamma.sqrt(),
        energy: energy.sqrt(),
    }
}
