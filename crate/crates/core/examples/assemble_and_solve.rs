//! Assembles a cracked Darcy problem by hand and solves it with both the
//! iterative and the direct solver.

use std::sync::Arc;

use crackfem::assembly::{assemble, constant, BoundaryCondition, BoundarySpec, Coefficients};
use crackfem::crack::{cut_chains, ChainShape, ChainSpec, CrackSpec};
use crackfem::mesh::{build_rectangle_mesh, BoundaryTag, Rectangle};
use crackfem::solve::{solve, SolverConfig};
use crackfem::Point;

fn main() -> crackfem::Result<()> {
    let rect = Rectangle::new(Point::new(0.0, 0.0), Point::new(2.0, 1.0))?;
    let mesh = build_rectangle_mesh(&rect, 0.05)?;
    // One diagonal crack, 50 times more permeable than the matrix.
    let spec = CrackSpec {
        nodes: vec![[0.3, 0.2], [1.7, 0.8]],
        chains: vec![ChainSpec {
            shape: ChainShape::Segment,
            nodes: [0, 1],
            a_gamma: 50.0,
            f_gamma: 0.0,
        }],
    };
    let crack = spec.build(0.005)?;
    let segments = cut_chains(&mesh, &crack)?;
    let boundary = BoundarySpec::default()
        .with(BoundaryTag::Left, BoundaryCondition::Dirichlet(constant(1.0)))
        .with(BoundaryTag::Right, BoundaryCondition::Dirichlet(Arc::new(|p: &Point| 0.2 * p.y)));
    let system = assemble(&mesh, &segments, &crack, &Coefficients::uniform(1.0, constant(0.0)), &boundary)?;
    println!("{} unknowns, {} nonzeros, {} crack segments", system.n(), system.matrix.nnz(), segments.len());

    let cg = solve(&system, &SolverConfig::default())?;
    let direct = solve(&system, &SolverConfig::direct())?;
    let diff = cg.values.iter().zip(&direct.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("cg: {} iterations, residual {:.2e}", cg.info.iterations, cg.info.relative_residual);
    println!("max |u_cg - u_direct| = {diff:.2e}");
    Ok(())
}
