//! Cutting crack chains at element sides.

use rayon::prelude::*;

use crate::geom::{Aabb, Point, Vec2};
use crate::mesh::Mesh;
use crate::{Error, Result};

use super::{clip_segment, CrackGraph, CrackIndex};

/// A piece of a chain lying inside the closure of one triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrackSegment {
    pub triangle: usize,
    pub start: Point,
    pub end: Point,
    pub chain: usize,
    /// Polyline piece of the chain the segment belongs to.
    pub piece: usize,
    /// Parameter range on that piece.
    pub range: (f64, f64),
    pub length: f64,
}

impl CrackSegment {
    pub fn midpoint(&self) -> Point {
        Point::from((self.start.coords + self.end.coords) * 0.5)
    }

    pub fn tangent(&self) -> Vec2 {
        (self.end - self.start) / self.length
    }
}

/// Crack pieces, each owned by one triangle, ordered by chain, then by
/// position along the chain.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SegmentedCrack {
    pub segments: Vec<CrackSegment>,
}

impl SegmentedCrack {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn chain_length(&self, chain: usize) -> f64 {
        self.segments.iter().filter(|s| s.chain == chain).map(|s| s.length).sum()
    }

    pub fn chain_segments(&self, chain: usize) -> impl Iterator<Item = &CrackSegment> {
        self.segments.iter().filter(move |s| s.chain == chain)
    }

    /// Permutes the segment list (assembly must not depend on the order).
    pub fn reordered(&self, order: &[usize]) -> Self {
        Self {
            segments: order.iter().map(|&i| self.segments[i]).collect(),
        }
    }
}

/// Splits every chain piece at the element sides it crosses.
///
/// A stretch of crack lying on an interior edge belongs to both adjacent
/// triangles geometrically; it is assigned to the lower triangle index so the
/// interface form is integrated once. Sub-pieces shorter than the geometric
/// tolerance are merged into their predecessor.
pub fn cut_chains(mesh: &Mesh, crack: &CrackGraph) -> Result<SegmentedCrack> {
    let tol = mesh.geometric_tolerance();
    let index = CrackIndex::new(crack, tol);
    if index.is_empty() {
        return Ok(SegmentedCrack::default());
    }

    let index = &index;
    let hits: Vec<(usize, f64, f64, usize)> = (0..mesh.num_triangles())
        .into_par_iter()
        .flat_map_iter(|t| {
            let tri = mesh.triangle_points(t);
            index
                .candidates(&Aabb::from_points(&tri))
                .into_iter()
                .filter_map(move |n| {
                    let (a, b) = index.piece(n);
                    clip_segment(&a, &b, &tri, tol).map(|(s0, s1)| (n, s0, s1, t))
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let mut per_piece: Vec<Vec<(f64, f64, usize)>> = vec![Vec::new(); index.num_pieces()];
    for (n, s0, s1, t) in hits {
        per_piece[n].push((s0, s1, t));
    }

    let segments: Vec<Vec<CrackSegment>> = per_piece
        .par_iter()
        .enumerate()
        .map(|(n, intervals)| {
            let (a, b) = index.piece(n);
            let (chain, piece) = index.piece_id(n);
            split_piece(a, b, chain, piece, intervals, tol)
        })
        .collect::<Result<_>>()?;

    Ok(SegmentedCrack {
        segments: segments.into_iter().flatten().collect(),
    })
}

fn split_piece(
    a: Point,
    b: Point,
    chain: usize,
    piece: usize,
    intervals: &[(f64, f64, usize)],
    tol: f64,
) -> Result<Vec<CrackSegment>> {
    let len = (b - a).norm();
    let stol = tol / len;
    let outside = |s: f64| {
        let p = a + (b - a) * s;
        Error::CrackOutsideMesh { chain, x: p.x, y: p.y }
    };

    let mut breaks: Vec<f64> = intervals.iter().flat_map(|&(s0, s1, _)| [s0, s1]).collect();
    breaks.push(0.0);
    breaks.push(1.0);
    breaks.sort_by(f64::total_cmp);
    let mut cuts = vec![0.0];
    for s in breaks {
        if s > *cuts.last().unwrap() + stol && s < 1.0 - stol {
            cuts.push(s);
        }
    }
    cuts.push(1.0);

    let mut owned: Vec<(f64, f64, usize)> = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let owner = intervals
            .iter()
            .filter(|&&(s0, s1, _)| s0 <= mid && mid <= s1)
            .map(|&(_, _, t)| t)
            .min()
            .ok_or_else(|| outside(mid))?;
        match owned.last_mut() {
            Some(last) if last.2 == owner => last.1 = w[1],
            _ => owned.push((w[0], w[1], owner)),
        }
    }

    Ok(owned
        .into_iter()
        .map(|(s0, s1, t)| {
            let start = if s0 == 0.0 { a } else { a + (b - a) * s0 };
            let end = if s1 == 1.0 { b } else { a + (b - a) * s1 };
            CrackSegment {
                triangle: t,
                start,
                end,
                chain,
                piece,
                range: (s0, s1),
                length: len * (s1 - s0),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crack::{ChainShape, ChainSpec, CrackSpec};
    use crate::mesh::{build_rectangle_mesh, Rectangle};

    fn segment_crack(p: [f64; 2], q: [f64; 2]) -> CrackGraph {
        CrackSpec {
            nodes: vec![p, q],
            chains: vec![ChainSpec {
                shape: ChainShape::Segment,
                nodes: [0, 1],
                a_gamma: 1.0,
                f_gamma: 0.0,
            }],
        }
        .build(10.0)
        .unwrap()
    }

    fn unit(h: f64) -> Mesh {
        let r = Rectangle::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        build_rectangle_mesh(&r, h).unwrap()
    }

    #[test]
    fn segment_inside_one_triangle_is_unchanged() {
        let mesh = unit(1.0);
        // Below the diagonal: triangle 0 = (1,0),(1,1),(0,0).
        let crack = segment_crack([0.6, 0.1], [0.8, 0.3]);
        let cut = cut_chains(&mesh, &crack).unwrap();
        assert_eq!(cut.len(), 1);
        assert_eq!(cut.segments[0].triangle, 0);
        assert_eq!(cut.segments[0].start, Point::new(0.6, 0.1));
        assert_eq!(cut.segments[0].end, Point::new(0.8, 0.3));
    }

    #[test]
    fn crossing_the_diagonal_splits_at_the_crossing() {
        let mesh = unit(1.0);
        let crack = segment_crack([0.2, 0.6], [0.8, 0.2]);
        let cut = cut_chains(&mesh, &crack).unwrap();
        assert_eq!(cut.len(), 2);
        // Line y = 0.6 - (2/3)(x - 0.2) meets y = x at x = 0.44.
        let x = Point::new(0.44, 0.44);
        assert!((cut.segments[0].end - x).norm() < 1e-15);
        assert!((cut.segments[1].start - x).norm() < 1e-15);
        let total: f64 = cut.segments.iter().map(|s| s.length).sum();
        assert!((total - crack.total_length()).abs() < 1e-15);
        assert_eq!(cut.segments[0].triangle, 1);
        assert_eq!(cut.segments[1].triangle, 0);
    }

    #[test]
    fn crack_on_a_shared_edge_is_owned_once() {
        let mesh = unit(1.0);
        let crack = segment_crack([0.0, 0.0], [1.0, 1.0]);
        let cut = cut_chains(&mesh, &crack).unwrap();
        assert_eq!(cut.len(), 1);
        assert_eq!(cut.segments[0].triangle, 0);
        assert!((cut.segments[0].length - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn leaving_the_mesh_is_reported() {
        let mesh = unit(0.5);
        let crack = segment_crack([0.5, 0.5], [1.5, 0.5]);
        assert!(matches!(cut_chains(&mesh, &crack), Err(Error::CrackOutsideMesh { chain: 0, .. })));
    }
}
