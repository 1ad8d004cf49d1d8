use crate::geom::{self, Point};

use super::CrackGraph;

/// Distance from `x` to the crack.
///
/// The sign is only meaningful for a crack made of one closed chain: then
/// the value is positive in the enclosed region and negative outside. For
/// every other crack the unsigned distance is returned.
pub fn signed_distance_to_crack(x: &Point, crack: &CrackGraph) -> f64 {
    let d = crack
        .pieces()
        .map(|(_, _, a, b)| geom::point_segment_distance(x, &a, &b))
        .fold(f64::INFINITY, f64::min);
    match crack.chains() {
        [c] if c.is_closed() => {
            if winding_inside(x, &c.points) {
                d
            } else {
                -d
            }
        }
        _ => d,
    }
}

/// Even-odd point-in-polygon test for a closed polyline.
fn winding_inside(x: &Point, poly: &[Point]) -> bool {
    let mut inside = false;
    for w in poly.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a.y > x.y) != (b.y > x.y) {
            let xc = a.x + (x.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if x.x < xc {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crack::{ChainShape, ChainSpec, CrackSpec};
    use std::f64::consts::E;

    #[test]
    fn circle_distance_is_signed() {
        let crack = CrackSpec {
            nodes: vec![[E, 0.0]],
            chains: vec![ChainSpec {
                shape: ChainShape::Circle {
                    center: [0.0, 0.0],
                    clockwise: false,
                },
                nodes: [0, 0],
                a_gamma: 1.0,
                f_gamma: 0.0,
            }],
        }
        .build(1e-3)
        .unwrap();
        let sagitta = 1e-6 / (8.0 * E);
        for (r, theta) in [(1.0, 0.3), (2.0, 2.0), (3.0, 4.0), (3.4, 5.5)] {
            let x = Point::new(r * f64::cos(theta), r * f64::sin(theta));
            let d = signed_distance_to_crack(&x, &crack);
            let expected = E - r;
            assert!((d - expected).abs() <= sagitta + 1e-12, "r = {r}: {d} vs {expected}");
        }
        assert_eq!(signed_distance_to_crack(&crack.nodes()[0], &crack), 0.0);
    }
}
