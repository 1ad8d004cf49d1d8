//! The bifurcating crack network: flux balance at the nodes as the crack
//! band is refined. Results for the finest level go to `network_out/`.

use crackfem::config::preset;
use crackfem::study::{run_single, solve_level};

fn main() -> crackfem::Result<()> {
    let config = preset("network")?;
    for divisions in [4, 8, 16] {
        let level = solve_level(&config, 0, divisions)?;
        let max = level.kirchhoff.iter().map(|b| b.imbalance.abs()).fold(0.0, f64::max);
        println!(
            "divisions {divisions:>2}: {:>6} vertices, h_gamma {:.2e}, max imbalance {max:.3e}",
            level.mesh.num_vertices(),
            level.h_gamma
        );
        for b in level.kirchhoff.iter().filter(|b| b.degree >= 3) {
            println!("    junction {} (degree {}): {:+.3e} of {:.3e}", b.node, b.degree, b.imbalance, b.flux_magnitude);
        }
    }
    let mut fine = config;
    fine.mesh.divisions = 16;
    run_single(&fine, Some(std::path::Path::new("network_out")))?;
    println!("wrote network_out/");
    Ok(())
}
