//! Exact solutions, error norms, convergence slopes and junction flux
//! balance.

mod eoc;
mod exact;
mod kirchhoff;
mod norms;

pub use eoc::{eoc, least_squares_slope, Slopes};
pub use exact::{ExactSolution, PlaneSolution, RadialExact, SineProduct};
pub use kirchhoff::{kirchhoff_residual, kirchhoff_residual_with, total_imbalance, NodeBalance, TangentSampling};
pub use norms::{error_norms, write_reports_csv, ErrorNorms, NormReport, Quadrature, CSV_HEADER};
