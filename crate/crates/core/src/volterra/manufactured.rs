//! Wraps a boundary problem so a chosen curve becomes its exact solution.

use super::config::QuadRule;
use super::problem::{BoundaryProblem, ErrSlot};
use super::singular::singular_quadrature;
use crate::error::{Error, Result};
use crate::num::quad;

/// A boundary problem whose exact solution is a prescribed smooth curve.
///
/// The wrapper shifts the maturity-mismatch slot of the inner problem by the
/// defect of the curve in the continuous equation, computed once per node
/// with fully converged quadrature. The shifted equation then has the curve
/// as its exact solution while every kernel, datum, and route of the inner
/// problem stays in play, which is what convergence-order and insertion
/// tests need.
pub struct ManufacturedProblem<'a, P, C>
where
    P: BoundaryProblem,
    C: Fn(f64) -> f64,
{
    inner: &'a P,
    curve: C,
    shifts: Vec<(f64, f64)>,
}

impl<'a, P, C> ManufacturedProblem<'a, P, C>
where
    P: BoundaryProblem,
    C: Fn(f64) -> f64,
{
    /// Builds the wrapper for the given node times. The curve must start at
    /// the inner problem's initial value, and the shift is only known at the
    /// listed times afterward.
    pub fn new(
        inner: &'a P,
        curve: C,
        curve_deriv: impl Fn(f64) -> f64,
        taus: &[f64],
    ) -> Result<Self> {
        let y_start = curve(0.0);
        let expected = inner.initial_value();
        if (y_start - expected).abs() > 1e-10 * expected.abs().max(1.0) {
            return Err(Error::domain(format!(
                "manufactured curve starts at {y_start}, the problem at {expected}"
            )));
        }
        let mut shifts = Vec::with_capacity(taus.len());
        for &tau in taus {
            if tau <= 0.0 {
                shifts.push((tau, 0.0));
                continue;
            }
            let y_tau = curve(tau);
            let datum = inner.datum(tau, y_tau)?;
            let inherited = inner.initial_term(tau, y_tau)?;
            let integral = reference_memory_integral(inner, &curve, &curve_deriv, tau)?;
            shifts.push((tau, datum - inherited - integral));
        }
        Ok(Self {
            inner,
            curve,
            shifts,
        })
    }

    /// The exact solution at a node time.
    pub fn exact(&self, tau: f64) -> f64 {
        (self.curve)(tau)
    }

    fn shift_at(&self, tau: f64) -> Result<f64> {
        for (node, value) in &self.shifts {
            if (tau - node).abs() <= 1e-12 * node.abs().max(1.0) {
                return Ok(*value);
            }
        }
        Err(Error::domain(format!(
            "manufactured shift is only known at the construction nodes, not at tau = {tau}"
        )))
    }
}

/// Fully converged memory integral of a problem along an exact curve.
///
/// The two cusp-substituted routes converge on their own ladder; the grid
/// remainder, smooth away from the diagonal, goes to the adaptive rule up to
/// the problem's smallest evaluable separation, with the leftover sliver
/// closed by linear extrapolation.
pub fn reference_memory_integral<P, C, D>(
    problem: &P,
    curve: &C,
    curve_deriv: &D,
    tau: f64,
) -> Result<f64>
where
    P: BoundaryProblem + ?Sized,
    C: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let y_tau = curve(tau);
    let errs = ErrSlot::new();

    let singular_part = {
        let factor = |s: f64| {
            let s = s.min(tau);
            errs.absorb(problem.singular_factor(tau, y_tau, s, curve(s), curve_deriv(s)))
        };
        singular_quadrature(&factor, tau, true, QuadRule::Simpson)
    };
    if let Some(e) = errs.take() {
        return Err(e);
    }

    let half_power_part = {
        let factor = |s: f64| {
            errs.absorb(problem.half_power_remainder(tau, y_tau, s, curve(s), curve_deriv(s)))
        };
        singular_quadrature(&factor, tau, false, QuadRule::Simpson)
    };
    if let Some(e) = errs.take() {
        return Err(e);
    }

    let sliver = problem.min_delta().max(tau * 1e-12);
    let cut = tau - sliver;
    let grid_part = {
        let f = |s: f64| {
            errs.absorb(problem.grid_remainder(tau, y_tau, s, curve(s), curve_deriv(s)))
        };
        let body = quad::integrate(&f, 0.0, cut, 1e-13, 1e-12).value;
        let tail = if sliver > 0.0 && cut > sliver {
            sliver * (1.5 * f(cut) - 0.5 * f(cut - sliver))
        } else {
            0.0
        };
        body + tail
    };
    if let Some(e) = errs.take() {
        return Err(e);
    }

    Ok(singular_part + half_power_part + grid_part)
}

impl<P, C> BoundaryProblem for ManufacturedProblem<'_, P, C>
where
    P: BoundaryProblem,
    C: Fn(f64) -> f64,
{
    fn tau_max(&self) -> f64 {
        self.inner.tau_max()
    }

    fn initial_value(&self) -> f64 {
        self.inner.initial_value()
    }

    fn datum(&self, tau: f64, y: f64) -> Result<f64> {
        self.inner.datum(tau, y)
    }

    fn datum_dy(&self, tau: f64, y: f64) -> Result<f64> {
        self.inner.datum_dy(tau, y)
    }

    fn invert_datum(&self, tau: f64, target: f64, y_guess: f64) -> Result<f64> {
        self.inner.invert_datum(tau, target, y_guess)
    }

    fn singular_factor(
        &self,
        tau: f64,
        y_tau: f64,
        s: f64,
        y_s: f64,
        y_s_slope: f64,
    ) -> Result<f64> {
        self.inner.singular_factor(tau, y_tau, s, y_s, y_s_slope)
    }

    fn half_power_remainder(
        &self,
        tau: f64,
        y_tau: f64,
        s: f64,
        y_s: f64,
        y_s_slope: f64,
    ) -> Result<f64> {
        self.inner.half_power_remainder(tau, y_tau, s, y_s, y_s_slope)
    }

    fn grid_remainder(&self, tau: f64, y_tau: f64, s: f64, y_s: f64, y_s_slope: f64) -> Result<f64> {
        self.inner.grid_remainder(tau, y_tau, s, y_s, y_s_slope)
    }

    fn grid_remainder_diagonal(&self, tau: f64, y_tau: f64, y_slope: f64) -> Result<Option<f64>> {
        self.inner.grid_remainder_diagonal(tau, y_tau, y_slope)
    }

    fn initial_term(&self, tau: f64, y_tau: f64) -> Result<f64> {
        Ok(self.inner.initial_term(tau, y_tau)? + self.shift_at(tau)?)
    }

    fn positive_boundary(&self) -> bool {
        self.inner.positive_boundary()
    }

    fn min_delta(&self) -> f64 {
        self.inner.min_delta()
    }

    fn pullback(&self, tau: f64, y: f64) -> Result<(f64, f64)> {
        self.inner.pullback(tau, y)
    }
}
