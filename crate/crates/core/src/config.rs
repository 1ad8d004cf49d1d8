//! Problem files, the built-in function registry and shipped presets.
//!
//! Problem files are TOML with a `schema_version` field (currently 1). See
//! `presets/*.toml` for complete examples; the README documents every key.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analysis::{ExactSolution, PlaneSolution, RadialExact, SineProduct};
use crate::assembly::{constant, BoundaryCondition, BoundarySpec, Coefficients, ScalarFn};
use crate::crack::CrackSpec;
use crate::geom::Point;
use crate::mesh::{BoundaryTag, GammaRule, Rectangle, RefinementConfig};
use crate::solve::SolverConfig;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// A number or the name of a built-in function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionRef {
    Constant(f64),
    Named(String),
}

impl Default for FunctionRef {
    fn default() -> Self {
        Self::Constant(0.0)
    }
}

impl FunctionRef {
    pub fn resolve(&self) -> Result<ScalarFn> {
        match self {
            Self::Constant(v) => Ok(constant(*v)),
            Self::Named(name) => builtin_function(name),
        }
    }
}

/// Names accepted by [`builtin_function`].
pub const BUILTIN_FUNCTIONS: &[&str] = &[
    "zero",
    "one",
    "radial-exact-5-1",
    "plane-1-minus-x-over-13",
    "sine-product",
    "sine-product-source",
];

pub fn builtin_function(name: &str) -> Result<ScalarFn> {
    Ok(match name {
        "zero" => constant(0.0),
        "one" => constant(1.0),
        "sine-product-source" => Arc::new(SineProduct::source),
        _ => {
            let exact: Arc<dyn ExactSolution> = builtin_exact(name)?.into();
            Arc::new(move |x: &Point| exact.value(x))
        }
    })
}

pub fn builtin_exact(name: &str) -> Result<Box<dyn ExactSolution>> {
    match name {
        "radial-exact-5-1" => Ok(Box::new(RadialExact)),
        "plane-1-minus-x-over-13" => Ok(Box::new(PlaneSolution::network_plane())),
        "sine-product" => Ok(Box::new(SineProduct)),
        _ => Err(Error::UnknownFunction(name.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl DomainSpec {
    pub fn rectangle(&self) -> Result<Rectangle> {
        Rectangle::new(Point::new(self.x[0], self.y[0]), Point::new(self.x[1], self.y[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    /// Cells along the shorter side of the domain for single runs.
    pub divisions: usize,
}

fn default_spacing() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrackSection {
    /// Polyline part length as a fraction of the bulk mesh size `h`.
    #[serde(default = "default_spacing")]
    pub spacing_factor: f64,
    #[serde(flatten)]
    pub graph: CrackSpec,
}

impl Default for CrackSection {
    fn default() -> Self {
        Self {
            spacing_factor: default_spacing(),
            graph: CrackSpec::default(),
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    #[serde(default = "one")]
    pub a1: f64,
    #[serde(default = "one")]
    pub a2: f64,
    #[serde(default)]
    pub f: FunctionRef,
}

impl Default for CoefficientSpec {
    fn default() -> Self {
        Self {
            a1: 1.0,
            a2: 1.0,
            f: FunctionRef::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SideSpec {
    Dirichlet { value: FunctionRef },
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase", deny_unknown_fields)]
pub enum RefinementSpec {
    #[default]
    None,
    Fixed {
        h_gamma: f64,
        #[serde(default = "default_generations")]
        max_generations: usize,
    },
    Quadratic {
        #[serde(default = "one")]
        c: f64,
        #[serde(default = "default_generations")]
        max_generations: usize,
    },
}

fn default_generations() -> usize {
    64
}

impl RefinementSpec {
    pub fn config(&self, global_h: f64) -> Result<RefinementConfig> {
        let (rule, generations) = match *self {
            Self::None => (GammaRule::None, default_generations()),
            Self::Fixed { h_gamma, max_generations } => (GammaRule::Fixed(h_gamma), max_generations),
            Self::Quadratic { c, max_generations } => (GammaRule::Quadratic { c }, max_generations),
        };
        RefinementConfig::new(global_h, rule, generations)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySpec {
    /// Cells along the shorter side, one entry per level, coarse to fine.
    pub levels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub domain: DomainSpec,
    pub mesh: MeshSpec,
    #[serde(default)]
    pub crack: CrackSection,
    #[serde(default)]
    pub coefficients: CoefficientSpec,
    pub boundary: BTreeMap<BoundaryTag, SideSpec>,
    #[serde(default)]
    pub refinement: RefinementSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Built-in exact solution to measure errors against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study: Option<StudySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

impl ProblemConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Checks everything that can be checked without meshing.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.domain.rectangle()?;
        if self.mesh.divisions == 0 {
            return Err(Error::Config("mesh.divisions must be at least 1".into()));
        }
        if !(self.crack.spacing_factor > 0.0) {
            return Err(Error::Config("crack.spacing_factor must be positive".into()));
        }
        self.coefficients()?.validate()?;
        if !self.boundary_spec()?.has_dirichlet() {
            return Err(Error::NoDirichlet);
        }
        self.refinement.config(1.0)?;
        self.solver.validate()?;
        if let Some(name) = &self.exact {
            builtin_exact(name)?;
        }
        if let Some(study) = &self.study {
            if study.levels.len() < 3 {
                return Err(Error::Config("a study needs at least 3 levels".into()));
            }
            if study.levels.windows(2).any(|w| w[1] <= w[0]) || study.levels[0] == 0 {
                return Err(Error::Config("study levels must be increasing and positive".into()));
            }
        }
        Ok(())
    }

    pub fn coefficients(&self) -> Result<Coefficients> {
        let c = &self.coefficients;
        Ok(Coefficients {
            a1: c.a1,
            a2: c.a2,
            source: c.f.resolve()?,
            region: None,
        })
    }

    pub fn boundary_spec(&self) -> Result<BoundarySpec> {
        let mut spec = BoundarySpec::default();
        for (&tag, side) in &self.boundary {
            let bc = match side {
                SideSpec::Dirichlet { value } => BoundaryCondition::Dirichlet(value.resolve()?),
                SideSpec::Neumann => BoundaryCondition::Neumann,
            };
            spec.sides.insert(tag, bc);
        }
        Ok(spec)
    }

    pub fn exact_solution(&self) -> Result<Option<Box<dyn ExactSolution>>> {
        self.exact.as_deref().map(builtin_exact).transpose()
    }
}

/// A problem file shipped with the crate.
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "radial-uniform",
        summary: "circular crack, uniformly refined meshes (suboptimal rates)",
        toml: include_str!("../presets/radial-uniform.toml"),
    },
    Preset {
        name: "radial-local",
        summary: "circular crack, h_gamma = h^2 / diam refinement (optimal rates)",
        toml: include_str!("../presets/radial-local.toml"),
    },
    Preset {
        name: "poisson-baseline",
        summary: "no crack, manufactured sine solution (classical P1 rates)",
        toml: include_str!("../presets/poisson-baseline.toml"),
    },
    Preset {
        name: "network",
        summary: "bifurcating crack network, a_gamma = 100, locally refined",
        toml: include_str!("../presets/network.toml"),
    },
    Preset {
        name: "network-coarse",
        summary: "bifurcating crack network on the unrefined coarse mesh",
        toml: include_str!("../presets/network-coarse.toml"),
    },
    Preset {
        name: "network-plane",
        summary: "crack network with a_gamma = 0 (solution is the plane 1 - x/13)",
        toml: include_str!("../presets/network-plane.toml"),
    },
];

pub fn preset(name: &str) -> Result<ProblemConfig> {
    let p = PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    ProblemConfig::from_toml(p.toml, Path::new(p.name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses_and_round_trips() {
        for p in PRESETS {
            let cfg = preset(p.name).unwrap();
            assert_eq!(cfg.name, p.name);
            let again = ProblemConfig::from_toml(&cfg.to_toml(), Path::new("round-trip")).unwrap();
            assert_eq!(again, cfg, "{}", p.name);
        }
    }

    #[test]
    fn registry_names_resolve() {
        for name in BUILTIN_FUNCTIONS {
            builtin_function(name).unwrap();
        }
        assert!(matches!(builtin_function("nope"), Err(Error::UnknownFunction(_))));
        let plane = builtin_function("plane-1-minus-x-over-13").unwrap();
        assert_eq!(plane(&Point::new(13.0, 4.0)), 0.0);
    }

    #[test]
    fn validation_catches_bad_files() {
        let mut cfg = preset("network").unwrap();
        cfg.schema_version = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = preset("network").unwrap();
        cfg.boundary.clear();
        assert!(matches!(cfg.validate(), Err(Error::NoDirichlet)));
        let mut cfg = preset("radial-local").unwrap();
        cfg.study.as_mut().unwrap().levels = vec![8, 4, 16];
        assert!(cfg.validate().is_err());
        let bad = "schema_version = 1\nname = 'x'\n[domain]\nx = [0, 1]\ny = [0, 1]\n[mesh]\ndivisions = 4\n[boundary]\nleft = { kind = 'dirichlet', value = 'nope' }\n";
        assert!(ProblemConfig::from_toml(bad, Path::new("bad")).is_err());
    }
}
