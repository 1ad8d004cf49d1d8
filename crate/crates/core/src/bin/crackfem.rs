use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crackfem::config::{self, ProblemConfig};
use crackfem::solve::SolverMethod;
use crackfem::study;

#[derive(Parser)]
#[command(name = "crackfem", version, about = "P1 finite elements for flow in cracked media")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory, overriding the config's `output_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Linear solver, overriding the config.
    #[arg(long, global = true, value_enum)]
    solver: Option<Solver>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Cg,
    Direct,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and export mesh, field and norms.
    Run { config: String },
    /// Run the convergence study declared in the config.
    Study { config: String },
    /// Inspect the shipped presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset's TOML.
    Show { name: String },
}

/// A path to a TOML file, or the name of a preset.
fn load(arg: &str) -> crackfem::Result<ProblemConfig> {
    let path = Path::new(arg);
    if path.exists() {
        ProblemConfig::load(path)
    } else {
        config::preset(arg)
    }
}

fn prepare(cli: &Cli, arg: &str) -> crackfem::Result<(ProblemConfig, Option<PathBuf>)> {
    let mut cfg = load(arg)?;
    if let Some(s) = cli.solver {
        cfg.solver.method = match s {
            Solver::Cg => SolverMethod::Cg,
            Solver::Direct => SolverMethod::Direct,
        };
    }
    let out = cli.out.clone().or_else(|| cfg.output_dir.as_ref().map(PathBuf::from));
    Ok((cfg, out))
}

fn execute(cli: &Cli) -> crackfem::Result<()> {
    match &cli.command {
        Command::Run { config } => {
            let (cfg, out) = prepare(cli, config)?;
            let r = study::run_single(&cfg, out.as_deref())?;
            println!(
                "{}: {} vertices, {} triangles, {} crack segments, h = {:.4e}, h_gamma = {:.4e}",
                cfg.name,
                r.mesh.num_vertices(),
                r.mesh.num_triangles(),
                r.segments.len(),
                r.h,
                r.h_gamma
            );
            println!(
                "solver: {} iterations, relative residual {:.3e}",
                r.solution.info.iterations, r.solution.info.relative_residual
            );
            if let Some(e) = r.errors {
                println!(
                    "errors: L2 {:.4e}  H1 {:.4e}  L2(crack) {:.4e}  energy {:.4e}",
                    e.l2, e.h1_semi, e.l2_gamma, e.energy
                );
            }
            if !r.kirchhoff.is_empty() {
                let max = r.kirchhoff.iter().map(|b| b.imbalance.abs()).fold(0.0, f64::max);
                println!(
                    "kirchhoff: max |imbalance| {:.4e}, total {:.4e}",
                    max,
                    crackfem::analysis::total_imbalance(&r.kirchhoff)
                );
            }
            for b in r.kirchhoff.iter().filter(|b| b.degree >= 3) {
                println!("node {} (degree {}): flux imbalance {:.4e}", b.node, b.degree, b.imbalance);
            }
            if let Some(dir) = out {
                println!("wrote {}", dir.display());
            }
        }
        Command::Study { config } => {
            let (cfg, out) = prepare(cli, config)?;
            let s = study::run_convergence_study(&cfg, out.as_deref())?;
            print!("{}", crackfem::analysis::write_reports_csv(&s.reports));
            print!("{}", study::write_slopes_csv(&s.slopes));
            if let Some(dir) = out {
                println!("wrote {}", dir.display());
            }
        }
        Command::Presets { action } => match action {
            PresetAction::List => {
                for p in config::PRESETS {
                    println!("{:<18} {}", p.name, p.summary);
                }
            }
            PresetAction::Show { name } => {
                let p = config::PRESETS
                    .iter()
                    .find(|p| p.name == name)
                    .ok_or_else(|| crackfem::Error::UnknownPreset(name.clone()))?;
                print!("{}", p.toml);
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
