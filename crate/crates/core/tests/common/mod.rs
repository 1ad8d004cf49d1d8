#![allow(dead_code)]

use crackfem::analysis::RadialExact;
use crackfem::crack::{ChainShape, ChainSpec, CrackGraph, CrackSpec};
use crackfem::mesh::{build_rectangle_mesh, Mesh, Rectangle};
use crackfem::Point;

pub fn unit_square(n: usize) -> Mesh {
    let rect = Rectangle::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
    build_rectangle_mesh(&rect, 1.0 / n as f64).unwrap()
}

pub fn radial_mesh(n: usize) -> Mesh {
    let rect = RadialExact::domain();
    build_rectangle_mesh(&rect, rect.shorter_side() / n as f64).unwrap()
}

pub fn radial_crack(spacing: f64) -> CrackGraph {
    RadialExact::crack_spec().build(spacing).unwrap()
}

pub fn segment_chain(nodes: [usize; 2], a_gamma: f64) -> ChainSpec {
    ChainSpec {
        shape: ChainShape::Segment,
        nodes,
        a_gamma,
        f_gamma: 0.0,
    }
}

/// Three straight chains meeting at (0.45, 0.55) inside the unit square.
pub fn y_crack_spec(a_gamma: f64) -> CrackSpec {
    CrackSpec {
        nodes: vec![[0.45, 0.55], [0.1, 0.9], [0.85, 0.8], [0.5, 0.1]],
        chains: vec![
            segment_chain([0, 1], a_gamma),
            segment_chain([0, 2], a_gamma),
            segment_chain([0, 3], a_gamma),
        ],
    }
}

pub fn assert_conforming(mesh: &Mesh) {
    mesh.check_conforming().unwrap();
    for t in 0..mesh.num_triangles() {
        let tri = mesh.triangle_points(t);
        assert!(crackfem::geom::signed_area(&tri) > 0.0, "triangle {t} not counterclockwise");
    }
}
