//! Continuous P1 finite elements for Darcy flow in a matrix with embedded,
//! high-permeability cracks.
//!
//! The crack contribution is superimposed on the bulk stiffness: the
//! tangential Dirichlet energy of the continuous hat functions is integrated
//! along the crack, which is cut into pieces that each lie in one triangle.
//! No element is cut or enriched. Since the discrete solution cannot follow
//! the kink of the exact solution across the crack, the mesh is refined by
//! newest-vertex bisection around the crack until the interface-local size
//! satisfies `h_Γ ≤ C h² / diam(Ω)`, which restores first order in the energy
//! norm and second order in L².
//!
//! The modules follow the pipeline:
//!
//! - [`mesh`]: structured base meshes, crack marking, conforming refinement
//!   and text/VTK export.
//! - [`crack`]: crack graphs built from chain primitives, polyline sampling,
//!   segment clipping and chain cutting.
//! - [`assembly`]: bulk and interface element matrices, loads, Dirichlet
//!   elimination.
//! - [`solve`]: preconditioned conjugate gradients and a sparse Cholesky
//!   factorization with nested dissection ordering.
//! - [`analysis`]: exact solutions, error norms, convergence slopes and the
//!   Kirchhoff flux balance at crack junctions.
//! - [`config`] and [`study`]: declarative problem files, the built-in
//!   function registry, presets and study orchestration.

// NaN-rejecting `!(x > 0.0)` checks and index loops over small dense
// element matrices are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod assembly;
pub mod config;
pub mod crack;
mod error;
pub mod geom;
pub mod mesh;
pub mod solve;
pub mod sparse;
pub mod study;

pub use error::{Error, Result};
pub use geom::{Point, Vec2};
