use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("degenerate triangle {triangle} (signed area {area:e})")]
    DegenerateTriangle { triangle: usize, area: f64 },
    #[error("refinement did not reach h_gamma = {target:e} within {generations} generations (largest offending h_T = {worst:e})")]
    RefinementLimit {
        target: f64,
        generations: usize,
        worst: f64,
    },
    #[error("invalid crack: {0}")]
    InvalidCrack(String),
    #[error("crack chain {chain} leaves the mesh near ({x}, {y})")]
    CrackOutsideMesh { chain: usize, x: f64, y: f64 },
    #[error("segment does not lie in triangle {0}")]
    SegmentTriangleMismatch(usize),
    #[error("no Dirichlet boundary: the system is singular")]
    NoDirichlet,
    #[error("conjugate gradients did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown built-in function '{0}'")]
    UnknownFunction(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("convergence rates need {0}")]
    Rates(String),
    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
