//! Segment/triangle clipping and a bucket index over crack pieces.

use std::collections::HashMap;

use crate::geom::{self, Aabb, Point};

use super::CrackGraph;

/// Parameter interval `[s0, s1] ⊂ [0, 1]` of `p + s (q - p)` inside the
/// closed counterclockwise triangle `tri`, or `None` if they are disjoint.
///
/// `tol` is an absolute distance: a segment running within `tol` of an edge
/// line counts as lying on it, and a miss by less than `tol` counts as a
/// touch. Crossing parameters are computed exactly on the edge lines.
pub fn clip_segment(p: &Point, q: &Point, tri: &[Point; 3], tol: f64) -> Option<(f64, f64)> {
    let len = (q - p).norm();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for i in 0..3 {
        let a = tri[i];
        let b = tri[(i + 1) % 3];
        let edge = b - a;
        let elen = edge.norm();
        // Signed distances to the edge line, positive inside.
        let d0 = geom::cross(&edge, &(p - a)) / elen;
        let d1 = geom::cross(&edge, &(q - a)) / elen;
        let slope = d1 - d0;
        if slope.abs() <= tol {
            if d0.max(d1) < -tol {
                return None;
            }
            continue;
        }
        let s = -d0 / slope;
        if slope > 0.0 {
            lo = lo.max(s);
        } else {
            hi = hi.min(s);
        }
    }
    let slack = if len > 0.0 { tol / len } else { f64::INFINITY };
    if lo > hi + slack {
        return None;
    }
    if lo > hi {
        let mid = 0.5 * (lo + hi);
        lo = mid;
        hi = mid;
    }
    Some((lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0)))
}

/// The part of segment `pq` inside the closed triangle: empty, or a single
/// (possibly degenerate) sub-segment for a convex triangle.
pub fn segment_triangle_intersection(p: Point, q: Point, tri: &[Point; 3]) -> Vec<(Point, Point)> {
    let mut t = *tri;
    if geom::orient(&t[0], &t[1], &t[2]) < 0.0 {
        t.swap(1, 2);
    }
    let tol = 1e-12 * (q - p).norm().max(geom::diameter(&t));
    clip_segment(&p, &q, &t, tol)
        .map(|(s0, s1)| vec![(p + (q - p) * s0, p + (q - p) * s1)])
        .unwrap_or_default()
}

/// Uniform bucket grid over the polyline pieces of a crack.
pub struct CrackIndex {
    pieces: Vec<(Point, Point)>,
    ids: Vec<(usize, usize)>,
    origin: Point,
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<u32>>,
    tol: f64,
}

impl CrackIndex {
    pub fn new(crack: &CrackGraph, tol: f64) -> Self {
        let mut pieces = Vec::new();
        let mut ids = Vec::new();
        for (j, k, a, b) in crack.pieces() {
            pieces.push((a, b));
            ids.push((j, k));
        }
        let bbox = Aabb::from_points(pieces.iter().flat_map(|(a, b)| [a, b]));
        let mean = if pieces.is_empty() {
            1.0
        } else {
            pieces.iter().map(|(a, b)| (b - a).norm()).sum::<f64>() / pieces.len() as f64
        };
        let cell = (2.0 * mean).max(bbox.diagonal() / 4096.0).max(f64::MIN_POSITIVE);
        let mut index = Self {
            pieces,
            ids,
            origin: bbox.min,
            cell,
            buckets: HashMap::new(),
            tol,
        };
        for (n, (a, b)) in index.pieces.iter().enumerate() {
            let bb = Aabb::from_points([a, b]).inflate(tol);
            let (i0, j0, i1, j1) = index.cell_range(&bb);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    index.buckets.entry((i, j)).or_default().push(n as u32);
                }
            }
        }
        index
    }

    fn cell_range(&self, bb: &Aabb) -> (i64, i64, i64, i64) {
        let f = |v: f64, o: f64| ((v - o) / self.cell).floor() as i64;
        (
            f(bb.min.x, self.origin.x),
            f(bb.min.y, self.origin.y),
            f(bb.max.x, self.origin.x),
            f(bb.max.y, self.origin.y),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn piece(&self, n: usize) -> (Point, Point) {
        self.pieces[n]
    }

    /// `(chain, piece within chain)` of index entry `n`.
    pub fn piece_id(&self, n: usize) -> (usize, usize) {
        self.ids[n]
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    /// Sorted, deduplicated candidate pieces whose buckets overlap `bb`.
    pub fn candidates(&self, bb: &Aabb) -> Vec<usize> {
        if self.pieces.is_empty() {
            return Vec::new();
        }
        let (i0, j0, i1, j1) = self.cell_range(&bb.inflate(self.tol));
        let mut out = Vec::new();
        let cells = (i1 - i0 + 1).saturating_mul(j1 - j0 + 1);
        if cells > self.buckets.len() as i64 {
            // Box larger than the crack's footprint: scan the buckets instead.
            for (&(i, j), list) in &self.buckets {
                if (i0..=i1).contains(&i) && (j0..=j1).contains(&j) {
                    out.extend(list.iter().map(|&n| n as usize));
                }
            }
        } else {
            for i in i0..=i1 {
                for j in j0..=j1 {
                    if let Some(list) = self.buckets.get(&(i, j)) {
                        out.extend(list.iter().map(|&n| n as usize));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether the closed triangle meets any crack piece.
    pub fn intersects(&self, tri: &[Point; 3]) -> bool {
        let bb = Aabb::from_points(tri);
        self.candidates(&bb).into_iter().any(|n| {
            let (a, b) = self.pieces[n];
            clip_segment(&a, &b, tri, self.tol).is_some()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> [Point; 3] {
        [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]
    }

    #[test]
    fn inside_outside_and_crossing() {
        let t = reference();
        let inside = segment_triangle_intersection(Point::new(0.1, 0.1), Point::new(0.3, 0.2), &t);
        assert_eq!(inside, vec![(Point::new(0.1, 0.1), Point::new(0.3, 0.2))]);
        assert!(segment_triangle_intersection(Point::new(1.0, 1.0), Point::new(2.0, 1.5), &t).is_empty());
        let cross = segment_triangle_intersection(Point::new(-0.5, 0.25), Point::new(0.5, 0.25), &t);
        assert_eq!(cross.len(), 1);
        let (a, b) = cross[0];
        assert!((a - Point::new(0.0, 0.25)).norm() < 1e-15);
        assert!((b - Point::new(0.5, 0.25)).norm() < 1e-15);
    }

    #[test]
    fn touching_a_vertex_counts() {
        let t = reference();
        let hit = segment_triangle_intersection(Point::new(1.0, -1.0), Point::new(1.0, 1.0), &t);
        assert_eq!(hit.len(), 1);
        assert!((hit[0].0 - hit[0].1).norm() < 1e-12);
        assert!((hit[0].0 - Point::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn along_an_edge_is_inside() {
        let t = reference();
        let hit = segment_triangle_intersection(Point::new(-1.0, 0.0), Point::new(2.0, 0.0), &t);
        assert_eq!(hit.len(), 1);
        assert!((hit[0].0 - Point::new(0.0, 0.0)).norm() < 1e-15);
        assert!((hit[0].1 - Point::new(1.0, 0.0)).norm() < 1e-15);
    }
}
