//! Single runs and convergence studies driven by a [`ProblemConfig`].

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::analysis::{self, ErrorNorms, NodeBalance, NormReport, Quadrature, Slopes};
use crate::assembly::{self, LinearSystem};
use crate::config::ProblemConfig;
use crate::crack::{cut_chains, CrackGraph, SegmentedCrack};
use crate::mesh::{self, build_rectangle_mesh, refine_near_crack, Mesh};
use crate::solve::{self, SolutionField};
use crate::{Error, Result};

/// Everything produced by one discretization level.
#[derive(Debug, Clone)]
pub struct LevelResult {
    pub level: usize,
    pub divisions: usize,
    /// Largest element diameter of the unrefined mesh.
    pub h: f64,
    /// Largest diameter among crack-adjacent elements, `h` without a crack.
    pub h_gamma: f64,
    pub mesh: Mesh,
    pub crack: CrackGraph,
    pub segments: SegmentedCrack,
    pub bulk_a: Vec<f64>,
    pub system: LinearSystem,
    pub solution: SolutionField,
    pub errors: Option<ErrorNorms>,
    pub kirchhoff: Vec<NodeBalance>,
}

impl LevelResult {
    pub fn report(&self) -> Option<NormReport> {
        self.errors.map(|errors| NormReport {
            level: self.level,
            h: self.h,
            h_gamma: self.h_gamma,
            n_dofs: self.mesh.num_vertices(),
            errors,
        })
    }
}

/// Mesh size of the crack band after refinement.
pub fn crack_band_h(mesh: &Mesh, crack: &CrackGraph) -> f64 {
    let marked = mesh::mark_crack_elements(mesh, crack);
    marked.iter().map(|&t| mesh.diameter(t)).fold(0.0, f64::max)
}

/// Runs the full pipeline with `divisions` cells along the shorter side.
pub fn solve_level(config: &ProblemConfig, level: usize, divisions: usize) -> Result<LevelResult> {
    let rect = config.domain.rectangle()?;
    let base = build_rectangle_mesh(&rect, rect.shorter_side() / divisions as f64)?;
    let h = base.max_diameter();
    let crack = config.crack.graph.build(config.crack.spacing_factor * h)?;
    let refinement = config.refinement.config(h)?;
    let mesh = refine_near_crack(&base, &crack, &refinement)?;
    let h_gamma = if crack.is_empty() { h } else { crack_band_h(&mesh, &crack) };
    let segments = cut_chains(&mesh, &crack)?;
    let coefficients = config.coefficients()?;
    let bulk_a = coefficients.bulk_permeability(&mesh, &crack)?;
    let system = assembly::assemble(&mesh, &segments, &crack, &coefficients, &config.boundary_spec()?)?;
    let solution = solve::solve(&system, &config.solver)?;
    let errors = config.exact_solution()?.map(|exact| {
        analysis::error_norms(&mesh, &segments, &crack, &bulk_a, &solution, exact.as_ref(), Quadrature::default())
    });
    let kirchhoff = analysis::kirchhoff_residual(&solution, &mesh, &crack, &segments);
    Ok(LevelResult {
        level,
        divisions,
        h,
        h_gamma,
        mesh,
        crack,
        segments,
        bulk_a,
        system,
        solution,
        errors,
        kirchhoff,
    })
}

/// One vertex per line: `x y u`.
pub fn write_field_text(mesh: &Mesh, values: &[f64]) -> String {
    let mut s = format!("field vertices {}\n", mesh.num_vertices());
    for (p, u) in mesh.vertices().iter().zip(values) {
        let _ = writeln!(s, "{:?} {:?} {:?}", p.x, p.y, u);
    }
    s
}

pub fn write_kirchhoff_csv(balances: &[NodeBalance]) -> String {
    let mut s = String::from("node,degree,imbalance,flux_magnitude\n");
    for b in balances {
        let _ = writeln!(s, "{},{},{:e},{:e}", b.node, b.degree, b.imbalance, b.flux_magnitude);
    }
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

/// Solves at `mesh.divisions` and, when `out` is given, writes `mesh.txt`,
/// `field.txt`, `solution.vtk`, `kirchhoff.csv` and (with an exact solution)
/// `norms.csv` into it.
pub fn run_single(config: &ProblemConfig, out: Option<&Path>) -> Result<LevelResult> {
    config.validate()?;
    let result = solve_level(config, 0, config.mesh.divisions)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write(dir, "mesh.txt", &mesh::write_mesh_text(&result.mesh))?;
        write(dir, "field.txt", &write_field_text(&result.mesh, &result.solution.values))?;
        let vtk = mesh::write_vtk(&result.mesh, &[("u", &result.solution.values)])?;
        write(dir, "solution.vtk", &vtk)?;
        if !result.crack.is_empty() {
            write(dir, "kirchhoff.csv", &write_kirchhoff_csv(&result.kirchhoff))?;
        }
        if let Some(report) = result.report() {
            write(dir, "norms.csv", &analysis::write_reports_csv(&[report]))?;
        }
    }
    Ok(result)
}

#[derive(Debug, Clone)]
pub struct StudyResult {
    pub reports: Vec<NormReport>,
    pub slopes: Slopes,
}

pub fn write_slopes_csv(slopes: &Slopes) -> String {
    format!(
        "norm,slope\nl2,{:.6}\nh1_semi,{:.6}\nl2_gamma,{:.6}\nenergy,{:.6}\n",
        slopes.l2, slopes.h1_semi, slopes.l2_gamma, slopes.energy
    )
}

/// Solves every study level (in parallel), then fits convergence slopes.
/// Writes `rates.csv`, `slopes.csv` and one `level_<k>_norms.csv` per level
/// when `out` is given.
pub fn run_convergence_study(config: &ProblemConfig, out: Option<&Path>) -> Result<StudyResult> {
    config.validate()?;
    let study = config
        .study
        .as_ref()
        .ok_or_else(|| Error::Config("configuration has no [study] section".into()))?;
    if config.exact.is_none() {
        return Err(Error::Config("a convergence study needs an exact solution".into()));
    }
    let reports: Vec<NormReport> = study
        .levels
        .par_iter()
        .enumerate()
        .map(|(level, &divisions)| {
            let r = solve_level(config, level, divisions)?;
            Ok(r.report().expect("exact solution is declared"))
        })
        .collect::<Result<_>>()?;
    let slopes = analysis::eoc(&reports)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        for r in &reports {
            write(dir, &format!("level_{}_norms.csv", r.level), &analysis::write_reports_csv(std::slice::from_ref(r)))?;
        }
        write(dir, "rates.csv", &analysis::write_reports_csv(&reports))?;
        write(dir, "slopes.csv", &write_slopes_csv(&slopes))?;
    }
    Ok(StudyResult { reports, slopes })
}
