//! Boundary problem for the drift-reduced Gaussian spot model.

use std::f64::consts::PI;

use super::problem::{BoundaryProblem, ErrSlot};
use crate::error::{Error, Result};
use crate::kernels::heat;
use crate::kernels::policy::RepresentationPolicy;
use crate::models::{boundary_initial_value, ModelTransforms, OptionKind, OptionSpec, OuTransform};
use crate::num::interp::CubicSpline;
use crate::num::quad;

/// Sample count of the fast data curves in variance time.
const CURVE_SAMPLES: usize = 1024;

/// Call-boundary equation of the Gaussian spot model in the flat-wall frame.
///
/// The datum is the carry-adjusted slope of the lifted payoff along the
/// boundary. Its memory integral splits into the wall-flux term, whose
/// leading image goes through the singular route, and the interior source
/// term, whose Gaussian spike joins it while the bounded remainder runs
/// through the cusp-substituted weightless rule.
pub struct OuBoundaryProblem {
    /// Completed change of variables for the model curves.
    pub transform: OuTransform,
    /// Strike in spot units.
    pub strike: f64,
    /// Representation switching policy for the flat-wall kernels.
    pub policy: RepresentationPolicy,
    /// Routes the bounded source remainder through the composite grid sum
    /// instead of the weightless rule, matching the radial assembly's term
    /// placement for cross-model comparisons.
    pub source_on_grid: bool,
    y0: f64,
    has_initial_term: bool,
    curves: OuCurves,
}

/// Model data sampled against variance time for integrand-interior use.
struct OuCurves {
    carry: CubicSpline,
    discount: CubicSpline,
    scale: CubicSpline,
    variance_rate: CubicSpline,
    short_rate: CubicSpline,
    carry_rate: CubicSpline,
}

impl OuCurves {
    fn sample(transform: &OuTransform) -> Result<Self> {
        let tau_max = transform.tau_max();
        let mut taus = Vec::with_capacity(CURVE_SAMPLES + 1);
        let mut carry = Vec::with_capacity(CURVE_SAMPLES + 1);
        let mut discount = Vec::with_capacity(CURVE_SAMPLES + 1);
        let mut scale = Vec::with_capacity(CURVE_SAMPLES + 1);
        let mut variance_rate = Vec::with_capacity(CURVE_SAMPLES + 1);
        let mut short_rate = Vec::with_capacity(CURVE_SAMPLES + 1);
        let mut carry_rate = Vec::with_capacity(CURVE_SAMPLES + 1);
        for i in 0..=CURVE_SAMPLES {
            let tau = tau_max * i as f64 / CURVE_SAMPLES as f64;
            let t = transform.t_of_tau(tau)?;
            let g = transform.g(t);
            let sig = transform.sigma.value(t);
            taus.push(tau);
            carry.push(transform.forward_carry(t));
            discount.push(transform.forward_discount(t));
            scale.push(g);
            variance_rate.push(sig * sig * g * g);
            short_rate.push(transform.r.value(t));
            carry_rate.push(transform.q.value(t));
        }
        Ok(Self {
            carry: CubicSpline::new(taus.clone(), carry)?,
            discount: CubicSpline::new(taus.clone(), discount)?,
            scale: CubicSpline::new(taus.clone(), scale)?,
            variance_rate: CubicSpline::new(taus.clone(), variance_rate)?,
            short_rate: CubicSpline::new(taus.clone(), short_rate)?,
            carry_rate: CubicSpline::new(taus, carry_rate)?,
        })
    }
}

/// Adaptive integral of `f` over `[a, b]` with explicit breakpoints around
/// the wall at `y`, where small-time flux kernels concentrate in a layer of
/// width a few standard deviations that a global rule would step over.
fn layered_integral<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, y: f64, tau: f64) -> f64 {
    let width = 60.0 * tau.sqrt();
    let mut cuts = vec![a];
    for candidate in [y - width, y, y + width] {
        if candidate > a && candidate < b {
            cuts.push(candidate);
        }
    }
    cuts.push(b);
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        total += quad::integrate(f, pair[0], pair[1], 1e-13, 1e-11).value;
    }
    total
}

impl OuBoundaryProblem {
    /// Builds the call problem for a completed transform.
    pub fn new(
        transform: OuTransform,
        option: &OptionSpec,
        policy: RepresentationPolicy,
    ) -> Result<Self> {
        if option.kind != OptionKind::Call {
            return Err(Error::model(
                "the Gaussian boundary equation is assembled for calls; map puts through \
                 payoff symmetry before solving",
            ));
        }
        let y0 = boundary_initial_value(option, &ModelTransforms::Ou(&transform))?;
        let has_initial_term = y0 > option.strike * (1.0 + 1e-12);
        let curves = OuCurves::sample(&transform)?;
        Ok(Self {
            transform,
            strike: option.strike,
            policy,
            source_on_grid: false,
            y0,
            has_initial_term,
            curves,
        })
    }

    /// Datum value from the sampled curves, for integrand-interior points.
    fn psi_sampled(&self, s: f64, y: f64) -> f64 {
        let d = self.curves.carry.eval(s);
        let p = self.curves.discount.eval(s);
        let g = self.curves.scale.eval(s);
        d - p * (1.0 / g - self.strike / y)
    }

    /// Variance-time rate of the scaled payoff lifting along the boundary,
    /// the coefficient of the interior source term.
    fn source_rate(&self, s: f64, y: f64, y_slope: f64) -> f64 {
        let p = self.curves.discount.eval(s);
        let g = self.curves.scale.eval(s);
        let v = self.curves.variance_rate.eval(s);
        let r = self.curves.short_rate.eval(s);
        let q = self.curves.carry_rate.eval(s);
        2.0 * p / v * (q / g - r * self.strike / y) + p * self.strike * y_slope / (y * y)
    }
}

impl BoundaryProblem for OuBoundaryProblem {
    fn tau_max(&self) -> f64 {
        self.transform.tau_max()
    }

    fn initial_value(&self) -> f64 {
        self.y0
    }

    fn datum(&self, tau: f64, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::domain(format!(
                "boundary must stay positive, got {y}"
            )));
        }
        let t = self.transform.t_of_tau(tau)?;
        let d = self.transform.forward_carry(t);
        let p = self.transform.forward_discount(t);
        let g = self.transform.g(t);
        Ok(d - p * (1.0 / g - self.strike / y))
    }

    fn datum_dy(&self, tau: f64, y: f64) -> Result<f64> {
        let t = self.transform.t_of_tau(tau)?;
        Ok(-self.transform.forward_discount(t) * self.strike / (y * y))
    }

    fn invert_datum(&self, tau: f64, target: f64, _y_guess: f64) -> Result<f64> {
        let t = self.transform.t_of_tau(tau)?;
        let d = self.transform.forward_carry(t);
        let p = self.transform.forward_discount(t);
        let g = self.transform.g(t);
        let denom = target - d + p / g;
        if !(denom > 0.0) {
            return Err(Error::RootFinding(format!(
                "datum target {target} is not reachable by a positive boundary at tau = {tau}"
            )));
        }
        Ok(p * self.strike / denom)
    }

    fn singular_factor(
        &self,
        tau: f64,
        y_tau: f64,
        s: f64,
        y_s: f64,
        y_s_slope: f64,
    ) -> Result<f64> {
        let psi = self.psi_sampled(s, y_s);
        let rate = self.source_rate(s, y_s, y_s_slope);
        if s >= tau {
            return Ok((-0.5 * psi * y_s_slope + rate * y_s) / PI.sqrt());
        }
        let delta = tau - s;
        let gap = y_s - y_tau;
        let spike = (-gap * gap / (4.0 * delta)).exp();
        Ok((0.5 * psi * gap / delta + rate * y_s) * spike / PI.sqrt())
    }

    fn half_power_remainder(
        &self,
        tau: f64,
        y_tau: f64,
        s: f64,
        y_s: f64,
        y_s_slope: f64,
    ) -> Result<f64> {
        if self.source_on_grid {
            return Ok(0.0);
        }
        let delta = tau - s;
        let inner = heat::lambda_inner(y_tau, y_s, delta, &self.policy)?;
        let gap = y_s - y_tau;
        let spike = (-gap * gap / (4.0 * delta)).exp();
        let regular = inner + y_s / (PI * delta).sqrt() * spike;
        Ok(-self.source_rate(s, y_s, y_s_slope) * regular)
    }

    fn grid_remainder(
        &self,
        tau: f64,
        y_tau: f64,
        s: f64,
        y_s: f64,
        y_s_slope: f64,
    ) -> Result<f64> {
        let delta = tau - s;
        let mut value =
            self.psi_sampled(s, y_s) * heat::upsilon_plus(y_s, y_tau, delta, &self.policy)?;
        if self.source_on_grid {
            let inner = heat::lambda_inner(y_tau, y_s, delta, &self.policy)?;
            let gap = y_s - y_tau;
            let spike = (-gap * gap / (4.0 * delta)).exp();
            let regular = inner + y_s / (PI * delta).sqrt() * spike;
            value -= self.source_rate(s, y_s, y_s_slope) * regular;
        }
        Ok(value)
    }

    fn grid_remainder_diagonal(&self, _tau: f64, _y_tau: f64, _y_slope: f64) -> Result<Option<f64>> {
        if self.source_on_grid {
            // The source remainder has a known diagonal limit, but the paired
            // radial assembly extrapolates its final panel, so this layout
            // does the same to stay term-for-term comparable.
            Ok(None)
        } else {
            Ok(Some(0.0))
        }
    }

    fn initial_term(&self, tau: f64, y_tau: f64) -> Result<f64> {
        if !self.has_initial_term || tau <= 0.0 {
            return Ok(0.0);
        }
        let strike = self.strike;
        let y0 = self.y0;
        let chord = (y0 - strike) / y0;
        let errs = ErrSlot::new();
        // Terminal payoff minus its chord lifting, split at the strike kink.
        let below = |xi: f64| {
            let mismatch = -xi * chord;
            mismatch * errs.absorb(heat::boundary_flux(xi, y_tau, tau, &self.policy))
        };
        let above = |xi: f64| {
            let mismatch = (xi - strike) - xi * chord;
            mismatch * errs.absorb(heat::boundary_flux(xi, y_tau, tau, &self.policy))
        };
        let value = layered_integral(&below, 0.0, strike, y_tau, tau)
            + layered_integral(&above, strike, y0, y_tau, tau);
        if let Some(e) = errs.take() {
            return Err(e);
        }
        Ok(value)
    }

    fn pullback(&self, tau: f64, y: f64) -> Result<(f64, f64)> {
        let t = self.transform.t_of_tau(tau)?;
        Ok((t, self.transform.s_of_x(t, y)))
    }
}

/// Shared builders for the unit tests of this module and of the solvers.
#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::models::{ou_build_transform, ou_riccati_solve, OuModel, TimeCurve};

    /// Strike-60 column of the published time-dependent benchmark: decaying
    /// short rate, constant carry, fast-decaying volatility.
    pub(crate) fn benchmark_problem(strike: f64) -> OuBoundaryProblem {
        let model = OuModel {
            r: TimeCurve::Exponential {
                a0: 0.02,
                decay: 0.01,
            },
            q: TimeCurve::Constant(0.03),
            sigma: TimeCurve::Exponential {
                a0: 2.0 * strike,
                decay: 5.0,
            },
        };
        let w = ou_riccati_solve(&model, 1.0).expect("riccati solves");
        let transform = ou_build_transform(&model, &w, 1.0, 1200).expect("transform builds");
        let option = OptionSpec::new(OptionKind::Call, strike, 1.0).expect("valid option");
        OuBoundaryProblem::new(transform, &option, RepresentationPolicy::default())
            .expect("problem builds")
    }

    /// Mild constant-coefficient problem with modest total variance.
    pub(crate) fn mild_problem(r: f64, q: f64, sigma: f64) -> OuBoundaryProblem {
        let model = OuModel {
            r: TimeCurve::Constant(r),
            q: TimeCurve::Constant(q),
            sigma: TimeCurve::Constant(sigma),
        };
        let w = ou_riccati_solve(&model, 1.0).expect("riccati solves");
        let transform = ou_build_transform(&model, &w, 1.0, 800).expect("transform builds");
        let option = OptionSpec::new(OptionKind::Call, 60.0, 1.0).expect("valid option");
        OuBoundaryProblem::new(transform, &option, RepresentationPolicy::default())
            .expect("problem builds")
    }
}
