//! Parametric curves and their polygonal sampling.

use std::f64::consts::TAU;

use crate::geom::Point;
use crate::{Error, Result};

/// A continuous curve `[0, 1] → R²`.
pub trait ParametricCurve {
    fn point(&self, t: f64) -> Point;

    /// Exact arc length when the parametrization has constant speed.
    fn uniform_length(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LineCurve {
    pub start: Point,
    pub end: Point,
}

impl ParametricCurve for LineCurve {
    fn point(&self, t: f64) -> Point {
        self.start + (self.end - self.start) * t
    }

    fn uniform_length(&self) -> Option<f64> {
        Some((self.end - self.start).norm())
    }
}

/// Circular (or spiral, if the radii differ) arc around `center`.
#[derive(Debug, Clone, Copy)]
pub struct ArcCurve {
    pub center: Point,
    pub start_radius: f64,
    pub end_radius: f64,
    pub start_angle: f64,
    /// Signed sweep in radians, positive counterclockwise.
    pub sweep: f64,
}

impl ArcCurve {
    pub fn circle(center: Point, radius: f64) -> Self {
        Self {
            center,
            start_radius: radius,
            end_radius: radius,
            start_angle: 0.0,
            sweep: TAU,
        }
    }

    /// Arc from `start` to `end` around `center`, counterclockwise unless
    /// `clockwise`. Coincident endpoints give a full turn.
    pub fn between(center: Point, start: Point, end: Point, clockwise: bool) -> Self {
        let a0 = (start.y - center.y).atan2(start.x - center.x);
        let a1 = (end.y - center.y).atan2(end.x - center.x);
        let mut sweep = (a1 - a0).rem_euclid(TAU);
        if sweep < 1e-12 {
            sweep = TAU;
        }
        if clockwise {
            sweep -= TAU;
            if sweep > -1e-12 {
                sweep = -TAU;
            }
        }
        Self {
            center,
            start_radius: (start - center).norm(),
            end_radius: (end - center).norm(),
            start_angle: a0,
            sweep,
        }
    }
}

impl ParametricCurve for ArcCurve {
    fn point(&self, t: f64) -> Point {
        let r = self.start_radius + (self.end_radius - self.start_radius) * t;
        let a = self.start_angle + self.sweep * t;
        Point::new(self.center.x + r * a.cos(), self.center.y + r * a.sin())
    }

    fn uniform_length(&self) -> Option<f64> {
        (self.start_radius == self.end_radius).then(|| self.start_radius * self.sweep.abs())
    }
}

/// Bézier curve of arbitrary degree (de Casteljau evaluation).
#[derive(Debug, Clone)]
pub struct BezierCurve {
    pub controls: Vec<Point>,
}

impl ParametricCurve for BezierCurve {
    fn point(&self, t: f64) -> Point {
        let mut pts = self.controls.clone();
        for k in (1..pts.len()).rev() {
            for i in 0..k {
                pts[i] = pts[i] + (pts[i + 1] - pts[i]) * t;
            }
        }
        pts[0]
    }
}

/// Polyline through `points` with every part no longer than `spacing`.
///
/// Constant-speed curves are split into `ceil(L / spacing)` equal parts.
/// Other curves are reparametrized by arc length from a dense table and the
/// part count is raised until every chord satisfies the bound.
pub fn sample_curve(curve: &dyn ParametricCurve, spacing: f64) -> Result<Vec<Point>> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::InvalidCrack(format!("sampling spacing must be positive, got {spacing}")));
    }
    if let Some(len) = curve.uniform_length() {
        let n = parts(len, spacing);
        return Ok((0..=n).map(|k| curve.point(k as f64 / n as f64)).collect());
    }

    const DENSE: usize = 4096;
    let dense: Vec<Point> = (0..=DENSE).map(|k| curve.point(k as f64 / DENSE as f64)).collect();
    let mut arc = Vec::with_capacity(DENSE + 1);
    arc.push(0.0);
    for w in dense.windows(2) {
        arc.push(arc.last().unwrap() + (w[1] - w[0]).norm());
    }
    let len = *arc.last().unwrap();
    let mut n = parts(len, spacing);
    loop {
        let pts: Vec<Point> = (0..=n)
            .map(|k| {
                let target = len * k as f64 / n as f64;
                let i = arc.partition_point(|&s| s < target).clamp(1, DENSE);
                let (s0, s1) = (arc[i - 1], arc[i]);
                let frac = if s1 > s0 { (target - s0) / (s1 - s0) } else { 0.0 };
                curve.point((i - 1) as f64 / DENSE as f64 + frac / DENSE as f64)
            })
            .collect();
        if pts.windows(2).all(|w| (w[1] - w[0]).norm() <= spacing) {
            return Ok(pts);
        }
        n += 1 + n / 64;
    }
}

fn parts(len: f64, spacing: f64) -> usize {
    ((len / spacing) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}
