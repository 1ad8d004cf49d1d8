//! Planar geometry helpers shared by the mesh and crack modules.

pub type Point = nalgebra::Point2<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;

#[inline]
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Twice the signed area of `abc`, positive for counterclockwise order.
#[inline]
pub fn orient(a: &Point, b: &Point, c: &Point) -> f64 {
    cross(&(b - a), &(c - a))
}

#[inline]
pub fn signed_area(t: &[Point; 3]) -> f64 {
    0.5 * orient(&t[0], &t[1], &t[2])
}

/// Longest edge length.
pub fn diameter(t: &[Point; 3]) -> f64 {
    let a = (t[1] - t[0]).norm();
    let b = (t[2] - t[1]).norm();
    let c = (t[0] - t[2]).norm();
    a.max(b).max(c)
}

/// Smallest interior angle in degrees.
pub fn min_angle_deg(t: &[Point; 3]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..3 {
        let u = t[(i + 1) % 3] - t[i];
        let v = t[(i + 2) % 3] - t[i];
        let c = (u.dot(&v) / (u.norm() * v.norm())).clamp(-1.0, 1.0);
        min = min.min(c.acos().to_degrees());
    }
    min
}

pub fn centroid(t: &[Point; 3]) -> Point {
    Point::from((t[0].coords + t[1].coords + t[2].coords) / 3.0)
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn empty() -> Self {
        Self {
            min: Point::new(f64::INFINITY, f64::INFINITY),
            max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn from_points<'a>(pts: impl IntoIterator<Item = &'a Point>) -> Self {
        let mut b = Self::empty();
        for p in pts {
            b.insert(p);
        }
        b
    }

    pub fn insert(&mut self, p: &Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn inflate(&self, d: f64) -> Self {
        Self {
            min: Point::new(self.min.x - d, self.min.y - d),
            max: Point::new(self.max.x + d, self.max.y + d),
        }
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }
}

/// Distance from `x` to the closed segment `ab`.
pub fn point_segment_distance(x: &Point, a: &Point, b: &Point) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (x - a).norm();
    }
    let s = ((x - a).dot(&d) / len2).clamp(0.0, 1.0);
    (x - (a + s * d)).norm()
}

/// Barycentric coordinates of `x` with respect to `t`.
pub fn barycentric(t: &[Point; 3], x: &Point) -> [f64; 3] {
    let det = orient(&t[0], &t[1], &t[2]);
    let l1 = orient(x, &t[1], &t[2]) / det;
    let l2 = orient(&t[0], x, &t[2]) / det;
    [l1, l2, 1.0 - l1 - l2]
}
