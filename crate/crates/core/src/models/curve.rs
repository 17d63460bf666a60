//! Deterministic time curves for model parameters: constant level,
//! exponential decay, or sampled knots with cubic interpolation.

use crate::error::Result;
use crate::num::interp::CubicSpline;
use crate::num::quad;

/// Deterministic parameter curve of calendar time, differentiable on the
/// interval it was defined for.
#[derive(Debug, Clone)]
pub enum TimeCurve {
    /// Constant level.
    Constant(f64),
    /// `a0 * exp(-decay * t)`.
    Exponential { a0: f64, decay: f64 },
    /// Cubic spline through sampled knots, extrapolated by its end segments.
    Sampled(CubicSpline),
}

impl TimeCurve {
    /// Curve through sampled `(t, value)` knots. Needs at least two knots
    /// with strictly increasing times.
    pub fn sampled(knots: &[(f64, f64)]) -> Result<Self> {
        let xs: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let ys: Vec<f64> = knots.iter().map(|k| k.1).collect();
        Ok(TimeCurve::Sampled(CubicSpline::new(xs, ys)?))
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            TimeCurve::Constant(v) => *v,
            TimeCurve::Exponential { a0, decay } => a0 * (-decay * t).exp(),
            TimeCurve::Sampled(s) => s.eval(t),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            TimeCurve::Constant(_) => 0.0,
            TimeCurve::Exponential { a0, decay } => -decay * a0 * (-decay * t).exp(),
            TimeCurve::Sampled(s) => s.eval_deriv(t),
        }
    }

    /// Definite integral over [a, b], in closed form where one exists.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        match self {
            TimeCurve::Constant(v) => v * (b - a),
            TimeCurve::Exponential { a0, decay } => {
                if decay.abs() < 1e-14 {
                    a0 * (b - a)
                } else {
                    a0 / decay * ((-decay * a).exp() - (-decay * b).exp())
                }
            }
            TimeCurve::Sampled(s) => quad::integrate(&|t| s.eval(t), a, b, 1e-13, 1e-13).value,
        }
    }
}
