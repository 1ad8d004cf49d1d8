//! Convergence against the radial exact solution with and without
//! crack-local refinement. Pass `--quick` for three levels.

use crackfem::analysis::write_reports_csv;
use crackfem::config::preset;
use crackfem::study::run_convergence_study;

fn main() -> crackfem::Result<()> {
    let quick = std::env::args().any(|a| a == "--quick");
    for name in ["radial-uniform", "radial-local"] {
        let mut config = preset(name)?;
        if quick {
            config.study.as_mut().unwrap().levels = vec![8, 16, 32];
        }
        let study = run_convergence_study(&config, None)?;
        println!("# {name}");
        print!("{}", write_reports_csv(&study.reports));
        let s = study.slopes;
        println!(
            "slopes: L2 {:.3}  H1 {:.3}  L2(crack) {:.3}  energy {:.3}\n",
            s.l2, s.h1_semi, s.l2_gamma, s.energy
        );
    }
    Ok(())
}
