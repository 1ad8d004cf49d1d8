use crate::geom::Point;
use crate::{Error, Result};

use super::{BoundaryEdge, BoundaryTag, Mesh};

/// Axis-aligned rectangular domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    min: Point,
    max: Point,
}

impl Rectangle {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        let finite = min.iter().chain(max.iter()).all(|v| v.is_finite());
        if !finite || !(max.x > min.x) || !(max.y > min.y) {
            return Err(Error::InvalidDomain(format!(
                "degenerate rectangle [{}, {}] x [{}, {}]",
                min.x, max.x, min.y, max.y
            )));
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> Point {
        self.min
    }

    pub fn max(&self) -> Point {
        self.max
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn shorter_side(&self) -> f64 {
        self.width().min(self.height())
    }

    pub fn diameter(&self) -> f64 {
        (self.max - self.min).norm()
    }
}

/// Structured triangulation of `rect` with cells of side at most `target_h`.
///
/// Each of the `nx × ny` cells is split along its diagonal from the lower
/// left to the upper right corner. Both halves are right triangles whose
/// refinement edge is the shared diagonal, so the resulting mesh is ready for
/// newest-vertex bisection. `target_h` bounds the cell side; the element
/// diameter is the cell diagonal (`√2 target_h` on square cells).
pub fn build_rectangle_mesh(rect: &Rectangle, target_h: f64) -> Result<Mesh> {
    if !(target_h > 0.0) || !target_h.is_finite() {
        return Err(Error::InvalidDomain(format!("target_h must be positive, got {target_h}")));
    }
    if target_h > rect.shorter_side() * (1.0 + 1e-12) {
        return Err(Error::InvalidDomain(format!(
            "target_h = {target_h} exceeds the shorter rectangle side {}",
            rect.shorter_side()
        )));
    }
    let nx = cells(rect.width(), target_h);
    let ny = cells(rect.height(), target_h);
    let (x0, y0) = (rect.min.x, rect.min.y);
    let (dx, dy) = (rect.width() / nx as f64, rect.height() / ny as f64);

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        // Pin the last row/column to the exact bounds.
        let y = if j == ny { rect.max.y } else { y0 + j as f64 * dy };
        for i in 0..=nx {
            let x = if i == nx { rect.max.x } else { x0 + i as f64 * dx };
            vertices.push(Point::new(x, y));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;

    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (v00, v10, v01, v11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            triangles.push([v10, v11, v00]);
            triangles.push([v01, v00, v11]);
        }
    }

    let mut boundary = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        boundary.push(BoundaryEdge {
            vertices: [id(i, 0), id(i + 1, 0)],
            tag: BoundaryTag::Bottom,
        });
    }
    for j in 0..ny {
        boundary.push(BoundaryEdge {
            vertices: [id(nx, j), id(nx, j + 1)],
            tag: BoundaryTag::Right,
        });
    }
    for i in (0..nx).rev() {
        boundary.push(BoundaryEdge {
            vertices: [id(i + 1, ny), id(i, ny)],
            tag: BoundaryTag::Top,
        });
    }
    for j in (0..ny).rev() {
        boundary.push(BoundaryEdge {
            vertices: [id(0, j + 1), id(0, j)],
            tag: BoundaryTag::Left,
        });
    }
    Mesh::from_parts(vertices, triangles, boundary)
}

fn cells(len: f64, h: f64) -> usize {
    ((len / h) - 1e-9).ceil().max(1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Rectangle {
        Rectangle::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap()
    }

    #[test]
    fn coarsest_unit_square_is_one_diagonal_split() {
        let m = build_rectangle_mesh(&unit(), 1.0).unwrap();
        assert_eq!(m.num_vertices(), 4);
        assert_eq!(m.num_triangles(), 2);
        for h in m.diameters() {
            assert_eq!(h, 2f64.sqrt());
        }
        m.check_conforming().unwrap();
    }

    #[test]
    fn half_spacing_gives_structured_counts() {
        let m = build_rectangle_mesh(&unit(), 0.5).unwrap();
        assert_eq!(m.num_vertices(), 9);
        assert_eq!(m.num_triangles(), 8);
        assert!((m.area() - 1.0).abs() < 1e-15);
        assert!(m.min_angle_deg() >= 45.0 - 1e-9);
    }

    #[test]
    fn network_domain_sides_are_tagged() {
        let r = Rectangle::new(Point::new(0.0, 0.0), Point::new(13.0, 9.5)).unwrap();
        for h in [0.7, 1.3, 2.5] {
            let m = build_rectangle_mesh(&r, h).unwrap();
            m.check_conforming().unwrap();
            for e in m.boundary() {
                let [a, b] = e.vertices.map(|v| m.vertices()[v]);
                match e.tag {
                    BoundaryTag::Left => assert!(a.x == 0.0 && b.x == 0.0),
                    BoundaryTag::Right => assert!(a.x == 13.0 && b.x == 13.0),
                    BoundaryTag::Bottom => assert!(a.y == 0.0 && b.y == 0.0),
                    BoundaryTag::Top => assert!(a.y == 9.5 && b.y == 9.5),
                }
            }
        }
    }

    #[test]
    fn rejects_oversized_target() {
        let r = Rectangle::new(Point::new(0.0, 0.0), Point::new(2.0, 1.0)).unwrap();
        assert!(build_rectangle_mesh(&r, 1.5).is_err());
        assert!(build_rectangle_mesh(&r, 0.0).is_err());
        assert!(Rectangle::new(Point::new(0.0, 0.0), Point::new(0.0, 1.0)).is_err());
    }
}
