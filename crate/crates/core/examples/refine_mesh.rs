//! Newest-vertex bisection around a circular crack for a few bulk sizes.
//! Writes the finest mesh to `refined.vtk` in the working directory.

use crackfem::analysis::RadialExact;
use crackfem::mesh::{build_rectangle_mesh, dof_count_profile, refine_near_crack, write_vtk, GammaRule, RefinementConfig};

fn main() -> crackfem::Result<()> {
    let rect = RadialExact::domain();
    let mut last = None;
    for divisions in [8, 16, 32] {
        let base = build_rectangle_mesh(&rect, rect.shorter_side() / divisions as f64)?;
        let h = base.max_diameter();
        let crack = RadialExact::crack_spec().build(0.1 * h)?;
        let cfg = RefinementConfig::new(h, GammaRule::Quadratic { c: 1.0 }, 64)?;
        let mesh = refine_near_crack(&base, &crack, &cfg)?;
        let dofs = dof_count_profile(&mesh, &crack);
        println!(
            "divisions {divisions:>3}: h = {h:.3e}, target h_gamma = {:.3e}, {} -> {} vertices ({} near the crack), min angle {:.1} deg",
            cfg.target_h_gamma(mesh.domain_diameter()).unwrap(),
            base.num_vertices(),
            mesh.num_vertices(),
            dofs.n_near_crack,
            mesh.min_angle_deg()
        );
        last = Some(mesh);
    }
    let mesh = last.unwrap();
    std::fs::write("refined.vtk", write_vtk(&mesh, &[])?)?;
    println!("wrote refined.vtk");
    Ok(())
}
