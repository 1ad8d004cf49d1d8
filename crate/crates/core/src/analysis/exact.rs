use std::f64::consts::{E, PI};

use crate::crack::{ChainShape, ChainSpec, CrackSpec};
use crate::geom::{Point, Vec2};
use crate::mesh::Rectangle;

pub trait ExactSolution: Send + Sync {
    fn value(&self, x: &Point) -> f64;
    fn gradient(&self, x: &Point) -> Vec2;
}

/// Radial solution on `(1, e^{5/4})²` with a crack on the circle `r = e`,
/// `a = a_Γ = 1`, `f = 0` and `f_Γ = 1`:
///
/// ```text
/// u = (4 + e)/5 · log r                      for 1 < r < e
/// u = (4 - 4e)/5 · (log r - 5/4) + 1         for e < r < e^{5/4}
/// ```
///
/// `u` is constant on the crack, so the line source is balanced by the jump
/// of the radial flux alone.
#[derive(Debug, Clone, Copy, Default)]
pub struct RadialExact;

impl RadialExact {
    pub const CRACK_RADIUS: f64 = E;
    pub const F_GAMMA: f64 = 1.0;

    pub fn outer_radius() -> f64 {
        1.25f64.exp()
    }

    pub fn domain() -> Rectangle {
        let hi = Self::outer_radius();
        Rectangle::new(Point::new(1.0, 1.0), Point::new(hi, hi)).expect("valid square")
    }

    /// The arc `r = e` clipped to the square, from `(1, √(e²-1))` clockwise
    /// to `(√(e²-1), 1)`. Both end points lie on the domain boundary.
    pub fn crack_spec() -> CrackSpec {
        let y = (E * E - 1.0).sqrt();
        CrackSpec {
            nodes: vec![[1.0, y], [y, 1.0]],
            chains: vec![ChainSpec {
                shape: ChainShape::Arc {
                    center: [0.0, 0.0],
                    clockwise: true,
                },
                nodes: [0, 1],
                a_gamma: 1.0,
                f_gamma: Self::F_GAMMA,
            }],
        }
    }

    pub fn inner_value(r: f64) -> f64 {
        r.ln() / 5.0 * (4.0 + E)
    }

    pub fn outer_value(r: f64) -> f64 {
        (4.0 - 4.0 * E) / 5.0 * (r.ln() - 1.25) + 1.0
    }

    /// `du/dr` of the inner branch.
    pub fn inner_slope(r: f64) -> f64 {
        (4.0 + E) / (5.0 * r)
    }

    pub fn outer_slope(r: f64) -> f64 {
        (4.0 - 4.0 * E) / (5.0 * r)
    }

    pub fn inner_gradient(x: &Point) -> Vec2 {
        let r = x.coords.norm();
        x.coords * (Self::inner_slope(r) / r)
    }

    pub fn outer_gradient(x: &Point) -> Vec2 {
        let r = x.coords.norm();
        x.coords * (Self::outer_slope(r) / r)
    }

    /// Net bulk flux into the crack at `x`: `Σ_i a ∇u_i · ν_i` with `ν_i` the
    /// unit normal pointing from the crack into side `i`.
    pub fn flux_jump(x: &Point) -> f64 {
        let radial = x.coords / x.coords.norm();
        Self::inner_gradient(x).dot(&(-radial)) + Self::outer_gradient(x).dot(&radial)
    }
}

impl ExactSolution for RadialExact {
    fn value(&self, x: &Point) -> f64 {
        let r = x.coords.norm();
        if r < E {
            Self::inner_value(r)
        } else {
            Self::outer_value(r)
        }
    }

    fn gradient(&self, x: &Point) -> Vec2 {
        if x.coords.norm() < E {
            Self::inner_gradient(x)
        } else {
            Self::outer_gradient(x)
        }
    }
}

/// `sin(πx) sin(πy)`, solving `-Δu = 2π² u` on the unit square with zero
/// boundary values.
#[derive(Debug, Clone, Copy, Default)]
pub struct SineProduct;

impl SineProduct {
    pub fn source(x: &Point) -> f64 {
        2.0 * PI * PI * (PI * x.x).sin() * (PI * x.y).sin()
    }
}

impl ExactSolution for SineProduct {
    fn value(&self, x: &Point) -> f64 {
        (PI * x.x).sin() * (PI * x.y).sin()
    }

    fn gradient(&self, x: &Point) -> Vec2 {
        Vec2::new(
            PI * (PI * x.x).cos() * (PI * x.y).sin(),
            PI * (PI * x.x).sin() * (PI * x.y).cos(),
        )
    }
}

/// `u = c + g·x`.
#[derive(Debug, Clone, Copy)]
pub struct PlaneSolution {
    pub offset: f64,
    pub slope: Vec2,
}

impl PlaneSolution {
    /// `1 - x/13`: the crack-network solution without crack permeability.
    pub fn network_plane() -> Self {
        Self {
            offset: 1.0,
            slope: Vec2::new(-1.0 / 13.0, 0.0),
        }
    }
}

impl ExactSolution for PlaneSolution {
    fn value(&self, x: &Point) -> f64 {
        self.offset + self.slope.dot(&x.coords)
    }

    fn gradient(&self, _: &Point) -> Vec2 {
        self.slope
    }
}
