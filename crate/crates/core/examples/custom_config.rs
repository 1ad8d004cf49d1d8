//! Loads a problem from inline TOML, using named built-in functions for the
//! source and boundary data.

use std::path::Path;

use crackfem::config::{ProblemConfig, BUILTIN_FUNCTIONS};
use crackfem::study::run_single;

const PROBLEM: &str = r#"
schema_version = 1
name = "two-cracks"

[domain]
x = [0.0, 2.0]
y = [0.0, 1.0]

[mesh]
divisions = 16

[crack]
nodes = [[0.2, 0.3], [0.9, 0.6], [1.1, 0.2], [1.8, 0.9]]

[[crack.chains]]
kind = "segment"
nodes = [0, 1]
a_gamma = 20.0

[[crack.chains]]
kind = "arc"
center = [1.8, 0.2]
clockwise = true
nodes = [2, 3]
a_gamma = 5.0
f_gamma = 1.0

[coefficients]
f = "one"

[boundary]
left = { kind = "dirichlet", value = "zero" }
right = { kind = "dirichlet", value = 1.0 }
top = { kind = "neumann" }
bottom = { kind = "neumann" }

[refinement]
rule = "quadratic"
c = 2.0
"#;

fn main() -> crackfem::Result<()> {
    println!("built-in functions: {}", BUILTIN_FUNCTIONS.join(", "));
    let config = ProblemConfig::from_toml(PROBLEM, Path::new("inline.toml"))?;
    let level = run_single(&config, None)?;
    let (lo, hi) = level.solution.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| (lo.min(u), hi.max(u)));
    println!(
        "{}: {} vertices, {} segments, u in [{lo:.4}, {hi:.4}]",
        config.name,
        level.mesh.num_vertices(),
        level.segments.len()
    );
    Ok(())
}
