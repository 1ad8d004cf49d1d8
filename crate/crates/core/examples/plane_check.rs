//! With zero crack permeability the network problem reduces to a plane,
//! which P1 elements reproduce exactly.

use crackfem::analysis::{ExactSolution, PlaneSolution};
use crackfem::assembly::stiffness_matrix;
use crackfem::config::preset;
use crackfem::crack::{CrackGraph, SegmentedCrack};
use crackfem::study::run_single;

fn main() -> crackfem::Result<()> {
    let config = preset("network-plane")?;
    let level = run_single(&config, None)?;
    let plane = PlaneSolution::network_plane();
    let err = level
        .mesh
        .vertices()
        .iter()
        .zip(&level.solution.values)
        .map(|(p, u)| (u - plane.value(p)).abs())
        .fold(0.0, f64::max);
    let bare = stiffness_matrix(&level.mesh, &SegmentedCrack::default(), &CrackGraph::empty(), &level.bulk_a)?;
    println!("{} vertices, {} crack segments", level.mesh.num_vertices(), level.segments.len());
    println!("stiffness identical to the crack-free one: {}", level.system.stiffness.bitwise_eq(&bare));
    println!("max |u_h - (1 - x/13)| = {err:.2e}");
    Ok(())
}
