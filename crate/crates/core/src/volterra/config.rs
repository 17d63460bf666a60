//! Solver knobs and per-run diagnostics for the boundary equation.

use crate::error::{Error, Result};
use crate::kernels::policy::RepresentationPolicy;

/// Composite rule for the node sums of the assembled memory integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRule {
    /// Second-order trapezoid weights with a piecewise-linear boundary interpolant.
    Trapezoid,
    /// Fourth-order Simpson weights with a cubic-spline boundary interpolant.
    Simpson,
}

/// Placement of the time nodes on `[0, tau_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridSpacing {
    /// Equal steps.
    Uniform,
    /// Nodes at `tau_max * (i / m)^2`, clustered near the maturity end where
    /// the boundary has a square-root cusp.
    SqrtGraded,
}

/// Settings shared by the sequential and linearized boundary solvers.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Number of time steps; the grid has `m + 1` nodes.
    pub m: usize,
    /// Composite rule for the node sums, which also fixes the interpolant order.
    pub quadrature: QuadRule,
    /// Node placement on the time interval.
    pub spacing: GridSpacing,
    /// Convergence threshold on the absolute node residual.
    pub root_tol: f64,
    /// Iteration cap for the per-node root solve.
    pub max_newton_iters: usize,
    /// Convergence threshold on the largest boundary update of a sweep.
    pub fixed_point_tol: f64,
    /// Cap on the number of fixed-point sweeps.
    pub max_fixed_point_iters: usize,
    /// Representation switching policy handed to the flat-wall kernels.
    pub policy: RepresentationPolicy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            m: 20,
            quadrature: QuadRule::Simpson,
            spacing: GridSpacing::Uniform,
            root_tol: 1e-10,
            max_newton_iters: 50,
            fixed_point_tol: 1e-8,
            max_fixed_point_iters: 100,
            policy: RepresentationPolicy::default(),
        }
    }
}

impl SolverConfig {
    /// Checks the invariants both solvers rely on.
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::domain("solver needs at least two time steps"));
        }
        for (name, tol) in [
            ("root_tol", self.root_tol),
            ("fixed_point_tol", self.fixed_point_tol),
        ] {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {tol}"
                )));
            }
        }
        if self.max_newton_iters == 0 || self.max_fixed_point_iters == 0 {
            return Err(Error::domain("iteration caps must be at least one"));
        }
        if self.quadrature == QuadRule::Simpson && self.spacing == GridSpacing::SqrtGraded {
            return Err(Error::domain(
                "Simpson weights assume equal steps; use uniform spacing or the trapezoid rule",
            ));
        }
        Ok(())
    }
}

/// Per-node diagnostics of a finished boundary solve.
#[derive(Clone, Debug, Default)]
pub struct ResidualReport {
    /// Absolute re-assembled residual at each node.
    pub residuals: Vec<f64>,
    /// Root-solve iterations spent at each node.
    pub iterations: Vec<usize>,
    /// Non-fatal events, such as bisection fallbacks.
    pub warnings: Vec<String>,
}
