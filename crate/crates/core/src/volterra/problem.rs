//! Problem interface and residual assembly for the boundary equation.

use std::cell::RefCell;

use super::config::QuadRule;
use super::grid::YInterp;
use super::singular::singular_quadrature;
use crate::error::{Error, Result};

/// One model's boundary equation, split by how each integrand piece behaves
/// near the diagonal `s = tau`.
///
/// The memory integral is assembled from three routes. The singular factor
/// multiplies the `(tau - s)^(-1/2)` weight and is integrated by the cusp
/// substitution over the whole interval. The half-power remainder collects
/// terms that are bounded but carry half-integer powers of `tau - s`; the
/// same substitution makes them smooth, so they go through the weightless
/// rule. Whatever is left decays to a smooth limit at the diagonal and is
/// summed at the grid nodes by the composite rule.
pub trait BoundaryProblem {
    /// Total remaining variance time of the problem.
    fn tau_max(&self) -> f64;

    /// Boundary value at `tau = 0` in the transformed coordinate.
    fn initial_value(&self) -> f64;

    /// Left-hand datum of the equation at a node.
    fn datum(&self, tau: f64, y: f64) -> Result<f64>;

    /// Analytic boundary derivative of the datum.
    fn datum_dy(&self, tau: f64, y: f64) -> Result<f64>;

    /// Solves `datum(tau, y) = target` for the boundary value near a guess.
    fn invert_datum(&self, tau: f64, target: f64, y_guess: f64) -> Result<f64>;

    /// Smooth factor of the inverse-square-root part of the memory integrand.
    /// Called with `s == tau` it must return the diagonal limit.
    fn singular_factor(&self, tau: f64, y_tau: f64, s: f64, y_s: f64, y_s_slope: f64)
        -> Result<f64>;

    /// Bounded remainder carrying half-integer powers of `tau - s`, integrated
    /// after the cusp substitution. Never called at `s == tau`.
    fn half_power_remainder(
        &self,
        tau: f64,
        y_tau: f64,
        s: f64,
        y_s: f64,
        y_s_slope: f64,
    ) -> Result<f64>;

    /// Smooth remainder summed at the grid nodes. Never called at `s == tau`.
    fn grid_remainder(&self, tau: f64, y_tau: f64, s: f64, y_s: f64, y_s_slope: f64) -> Result<f64>;

    /// Diagonal limit of the grid remainder, or `None` when only one-sided
    /// extrapolation from earlier nodes is available.
    fn grid_remainder_diagonal(&self, tau: f64, y_tau: f64, y_slope: f64) -> Result<Option<f64>> {
        let _ = (tau, y_tau, y_slope);
        Ok(Some(0.0))
    }

    /// Contribution of the payoff mismatch at maturity, nonzero only when the
    /// terminal boundary sits strictly inside the payoff region.
    fn initial_term(&self, tau: f64, y_tau: f64) -> Result<f64> {
        let _ = (tau, y_tau);
        Ok(0.0)
    }

    /// Whether the transformed boundary coordinate must stay positive.
    fn positive_boundary(&self) -> bool {
        true
    }

    /// Smallest kernel time separation the problem can evaluate outside its
    /// singular templates, zero when there is no such floor.
    fn min_delta(&self) -> f64 {
        0.0
    }

    /// Maps a node back to calendar time and the boundary in original
    /// coordinates.
    fn pullback(&self, tau: f64, y: f64) -> Result<(f64, f64)>;
}

/// Captures the first error raised inside a quadrature closure.
pub(crate) struct ErrSlot(RefCell<Option<Error>>);

impl ErrSlot {
    pub(crate) fn new() -> Self {
        Self(RefCell::new(None))
    }

    /// Unwraps a sample, recording the first failure and substituting zero.
    pub(crate) fn absorb(&self, sample: Result<f64>) -> f64 {
        match sample {
            Ok(v) => v,
            Err(e) => {
                let mut slot = self.0.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                0.0
            }
        }
    }

    /// Takes the recorded failure, if any.
    pub(crate) fn take(&self) -> Option<Error> {
        self.0.borrow_mut().take()
    }
}

/// Assembles the residual of node `j` for a trial boundary value, given the
/// solved values at nodes `0..j`.
///
/// At `j = 0` the residual anchors the terminal condition: it is the datum
/// mismatch against the known initial value, zero exactly at that value. For
/// later nodes the boundary interpolant of the rule's order runs through the
/// known nodes and the trial value, and the three integrand routes are summed
/// over `[0, taus[j]]`. Kernel failures carry the node index.
pub fn assemble_node_residual<P: BoundaryProblem + ?Sized>(
    problem: &P,
    taus: &[f64],
    known_ys: &[f64],
    j: usize,
    y_trial: f64,
    rule: QuadRule,
) -> Result<f64> {
    let wrap = |e: Error| Error::BoundaryNode {
        node: j,
        reason: e.to_string(),
    };
    assert!(j < taus.len(), "node index inside the grid");
    assert!(known_ys.len() >= j, "need solved values at nodes 0..j");
    let tau = taus[j];

    if j == 0 {
        let anchor = problem
            .datum(tau, problem.initial_value())
            .map_err(wrap)?;
        return Ok(problem.datum(tau, y_trial).map_err(wrap)? - anchor);
    }

    let mut ys = known_ys[..j].to_vec();
    ys.push(y_trial);
    let interp = YInterp::through(&taus[..=j], &ys, rule).map_err(wrap)?;
    let slope_tau = interp.deriv(tau);

    let errs = ErrSlot::new();
    let singular_part = {
        let factor = |s: f64| {
            if s >= tau {
                errs.absorb(problem.singular_factor(tau, y_trial, tau, y_trial, slope_tau))
            } else {
                errs.absorb(problem.singular_factor(tau, y_trial, s, interp.eval(s), interp.deriv(s)))
            }
        };
        singular_quadrature(&factor, tau, true, rule)
    };
    if let Some(e) = errs.take() {
        return Err(wrap(e));
    }

    let half_power_part = {
        let factor = |s: f64| {
            errs.absorb(problem.half_power_remainder(tau, y_trial, s, interp.eval(s), interp.deriv(s)))
        };
        singular_quadrature(&factor, tau, false, rule)
    };
    if let Some(e) = errs.take() {
        return Err(wrap(e));
    }

    let grid_part = grid_route(problem, taus, &ys, j, y_trial, slope_tau, rule).map_err(wrap)?;

    let datum = problem.datum(tau, y_trial).map_err(wrap)?;
    let initial = problem.initial_term(tau, y_trial).map_err(wrap)?;
    Ok(datum - initial - (singular_part + half_power_part + grid_part))
}

/// Composite-rule sum of the grid remainder over the nodes, with the final
/// panel closed by the diagonal limit or by extrapolation.
fn grid_route<P: BoundaryProblem + ?Sized>(
    problem: &P,
    taus: &[f64],
    ys: &[f64],
    j: usize,
    y_trial: f64,
    slope_tau: f64,
    rule: QuadRule,
) -> Result<f64> {
    let tau = taus[j];
    let mut samples = Vec::with_capacity(j + 1);
    for i in 0..j {
        let slope = node_slope(taus, ys, i);
        samples.push(problem.grid_remainder(tau, y_trial, taus[i], ys[i], slope)?);
    }
    let end = match problem.grid_remainder_diagonal(tau, y_trial, slope_tau)? {
        Some(diagonal) => diagonal,
        None => extrapolate_end(&samples),
    };
    samples.push(end);

    match rule {
        QuadRule::Simpson => {
            let h = taus[1] - taus[0];
            Ok(crate::num::quad::simpson_sampled(&samples, h))
        }
        QuadRule::Trapezoid => {
            let mut sum = 0.0;
            for i in 0..j {
                sum += 0.5 * (taus[i + 1] - taus[i]) * (samples[i] + samples[i + 1]);
            }
            Ok(sum)
        }
    }
}

/// One-sided slope estimate at a node from its neighbors.
fn node_slope(taus: &[f64], ys: &[f64], i: usize) -> f64 {
    let n = ys.len();
    if n < 2 {
        return 0.0;
    }
    if i == 0 {
        (ys[1] - ys[0]) / (taus[1] - taus[0])
    } else if i + 1 >= n {
        (ys[i] - ys[i - 1]) / (taus[i] - taus[i - 1])
    } else {
        // Slope of the parabola through the three surrounding nodes.
        let (t0, t1, t2) = (taus[i - 1], taus[i], taus[i + 1]);
        let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
        let h0 = t1 - t0;
        let h1 = t2 - t1;
        (y2 * h0 * h0 - y0 * h1 * h1 + y1 * (h1 * h1 - h0 * h0)) / (h0 * h1 * (h0 + h1))
    }
}

/// Quadratic extrapolation of the final-panel end value from earlier samples.
fn extrapolate_end(samples: &[f64]) -> f64 {
    match samples.len() {
        0 => 0.0,
        1 => samples[0],
        2 => 2.0 * samples[1] - samples[0],
        n => 3.0 * (samples[n - 1] - samples[n - 2]) + samples[n - 3],
    }
}
