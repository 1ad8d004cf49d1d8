//! Builds a Y-shaped crack from chain primitives and cuts it into
//! per-triangle segments.

use crackfem::crack::{cut_chains, ChainShape, ChainSpec, CrackSpec};
use crackfem::mesh::{build_rectangle_mesh, Rectangle};
use crackfem::Point;

fn main() -> crackfem::Result<()> {
    let rect = Rectangle::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0))?;
    let mesh = build_rectangle_mesh(&rect, 0.125)?;
    let chain = |shape, nodes| ChainSpec {
        shape,
        nodes,
        a_gamma: 10.0,
        f_gamma: 0.0,
    };
    let spec = CrackSpec {
        nodes: vec![[0.45, 0.55], [0.1, 0.9], [0.85, 0.8], [0.5, 0.1]],
        chains: vec![
            chain(ChainShape::Segment, [0, 1]),
            chain(
                ChainShape::Arc {
                    center: [0.75, 0.45],
                    clockwise: true,
                },
                [0, 2],
            ),
            chain(
                ChainShape::Bezier {
                    controls: vec![[0.3, 0.4], [0.6, 0.25]],
                },
                [0, 3],
            ),
        ],
    };
    let crack = spec.build(0.02)?;
    let cut = cut_chains(&mesh, &crack)?;
    for j in 0..crack.chains().len() {
        println!(
            "chain {j}: {} pieces, length {:.6}, {} segments, cut length {:.6}",
            crack.chains()[j].num_pieces(),
            crack.chains()[j].length(),
            cut.chain_segments(j).count(),
            cut.chain_length(j)
        );
    }
    for i in 0..crack.nodes().len() {
        println!("node {i}: degree {}", crack.incident_chains(i).len());
    }
    Ok(())
}
