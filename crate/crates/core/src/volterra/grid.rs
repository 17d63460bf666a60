//! Time grid, solved boundary values, and the interpolants the assembly samples.

use super::config::{GridSpacing, QuadRule};
use crate::error::Result;
use crate::num::interp::CubicSpline;

/// Builds the node abscissae on `[0, tau_max]` for the requested spacing.
pub fn build_taus(tau_max: f64, m: usize, spacing: GridSpacing) -> Vec<f64> {
    (0..=m)
        .map(|i| {
            let frac = i as f64 / m as f64;
            let frac = match spacing {
                GridSpacing::Uniform => frac,
                GridSpacing::SqrtGraded => frac * frac,
            };
            tau_max * frac
        })
        .collect()
}

/// Solved boundary in the transformed coordinate with its pull-back.
#[derive(Clone, Debug)]
pub struct BoundaryGrid {
    /// Node abscissae in remaining variance time, starting at zero.
    pub taus: Vec<f64>,
    /// Boundary values at the nodes in the transformed coordinate.
    pub ys: Vec<f64>,
    /// Per node, calendar time and the boundary in original coordinates.
    pub pullback: Vec<(f64, f64)>,
    /// Whether the root solve met its tolerance at each node.
    pub converged: Vec<bool>,
}

/// Boundary interpolant whose order matches the composite rule in use.
#[derive(Clone, Debug)]
pub enum YInterp {
    /// Piecewise-linear through the nodes.
    Linear { taus: Vec<f64>, ys: Vec<f64> },
    /// Not-a-knot cubic spline through the nodes.
    Spline(CubicSpline),
}

impl YInterp {
    /// Builds the interpolant matching the rule through the given nodes.
    pub fn through(taus: &[f64], ys: &[f64], rule: QuadRule) -> Result<Self> {
        match rule {
            QuadRule::Trapezoid => Ok(Self::Linear {
                taus: taus.to_vec(),
                ys: ys.to_vec(),
            }),
            QuadRule::Simpson => Ok(Self::Spline(CubicSpline::new(
                taus.to_vec(),
                ys.to_vec(),
            )?)),
        }
    }

    /// Interpolated boundary value.
    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            Self::Linear { taus, ys } => {
                let (i, w) = locate(taus, tau);
                ys[i] * (1.0 - w) + ys[i + 1] * w
            }
            Self::Spline(spline) => spline.eval(tau),
        }
    }

    /// Interpolated boundary slope.
    pub fn deriv(&self, tau: f64) -> f64 {
        match self {
            Self::Linear { taus, ys } => {
                let (i, _) = locate(taus, tau);
                (ys[i + 1] - ys[i]) / (taus[i + 1] - taus[i])
            }
            Self::Spline(spline) => spline.eval_deriv(tau),
        }
    }
}

/// Finds the segment index and local weight of `tau` in a sorted node list.
fn locate(taus: &[f64], tau: f64) -> (usize, f64) {
    let n = taus.len();
    let i = match taus.binary_search_by(|x| x.partial_cmp(&tau).expect("nodes are finite")) {
        Ok(i) => i.min(n - 2),
        Err(i) => i.clamp(1, n - 1) - 1,
    };
    let w = (tau - taus[i]) / (taus[i + 1] - taus[i]);
    (i, w.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_spans_the_interval() {
        let taus = build_taus(2.0, 4, GridSpacing::Uniform);
        assert_eq!(taus, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn graded_grid_clusters_near_zero() {
        let taus = build_taus(1.0, 4, GridSpacing::SqrtGraded);
        assert_eq!(taus[0], 0.0);
        assert_eq!(*taus.last().expect("nonempty"), 1.0);
        assert!((taus[1] - 1.0 / 16.0).abs() < 1e-15);
        assert!(taus.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn linear_interpolant_reproduces_lines() {
        let taus = vec![0.0, 0.4, 1.0, 1.5];
        let ys: Vec<f64> = taus.iter().map(|&t| 3.0 - 0.8 * t).collect();
        let interp = YInterp::through(&taus, &ys, QuadRule::Trapezoid).expect("builds");
        for &t in &[0.0, 0.2, 0.7, 1.49, 1.5] {
            assert!((interp.eval(t) - (3.0 - 0.8 * t)).abs() < 1e-14);
            assert!((interp.deriv(t) + 0.8).abs() < 1e-14);
        }
    }

    #[test]
    fn spline_interpolant_reproduces_cubics() {
        let taus: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
        let f = |t: f64| 1.0 + t - 0.5 * t * t + 0.25 * t * t * t;
        let df = |t: f64| 1.0 - t + 0.75 * t * t;
        let ys: Vec<f64> = taus.iter().map(|&t| f(t)).collect();
        let interp = YInterp::through(&taus, &ys, QuadRule::Simpson).expect("builds");
        for &t in &[0.05, 0.33, 0.71, 0.99] {
            assert!((interp.eval(t) - f(t)).abs() < 1e-12);
            assert!((interp.deriv(t) - df(t)).abs() < 1e-11);
        }
    }

    #[test]
    fn two_node_spline_degenerates_to_the_chord() {
        let interp = YInterp::through(&[0.0, 1.0], &[2.0, 4.0], QuadRule::Simpson).expect("builds");
        assert!((interp.eval(0.5) - 3.0).abs() < 1e-14);
        assert!((interp.deriv(0.25) - 2.0).abs() < 1e-14);
    }
}
