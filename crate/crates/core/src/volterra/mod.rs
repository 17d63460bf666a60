//! Early-exercise boundary equation: assembly, quadrature, and solvers.

pub mod config;
pub mod grid;
pub mod problem;
pub mod singular;

pub mod cev;
pub mod hw;
pub mod ou;

pub mod linearized;
pub mod manufactured;
pub mod sequential;

pub use config::{GridSpacing, QuadRule, ResidualReport, SolverConfig};
pub use grid::{build_taus, BoundaryGrid, YInterp};
pub use manufactured::{reference_memory_integral, ManufacturedProblem};
pub use ou::OuBoundaryProblem;
pub use problem::{assemble_node_residual, BoundaryProblem};
pub use sequential::solve_sequential;
pub use singular::singular_quadrature;
