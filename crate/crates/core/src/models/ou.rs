//! Time-dependent Ornstein-Uhlenbeck (Bachelier) model and its reduction to
//! the heat equation: dS = [r(t) - q(t)] S dt + sigma(t) dW with a normal
//! volatility. The change of variables x = S g(t), tau = tau(t) together
//! with a value weight e^{f(t,x)} turns the pricing PDE into u_tau = u_xx
//! on a moving interval.

use crate::error::{Error, Result};
use crate::models::cache::CachedCumulative;
use crate::models::curve::TimeCurve;
use crate::num::ode;
use crate::specfun::expint::expint_neg_int;

/// OU model curves.
#[derive(Debug, Clone)]
pub struct OuModel {
    pub r: TimeCurve,
    pub q: TimeCurve,
    pub sigma: TimeCurve,
}

impl OuModel {
    /// Rejects curves the reduction cannot handle: sigma must stay positive.
    fn check_sigma(&self, t_max: f64) -> Result<()> {
        for i in 0..=64 {
            let t = t_max * i as f64 / 64.0;
            if !(self.sigma.value(t) > 0.0) {
                return Err(Error::model(format!(
                    "sigma must be positive on [0, {t_max}], found {} at t = {t}",
                    self.sigma.value(t)
                )));
            }
        }
        Ok(())
    }
}

/// Right-hand side of the drift-reduction Riccati equation for w(t).
fn riccati_rhs(model: &OuModel, t: f64, w: f64) -> f64 {
    let r = model.r.value(t);
    let q = model.q.value(t);
    let sl = model.sigma.deriv(t) / model.sigma.value(t);
    2.0 * (r - q) * sl - ((r - q) * (r - q) + model.r.deriv(t) - model.q.deriv(t))
        + w * w
        + 2.0 * w * sl
}

/// Solves the Riccati equation for the drift-killing exponent backward from
/// its terminal normalization w(T) = q(T) - r(T), returning the solution as
/// a sampled curve on a dense grid.
pub fn ou_riccati_solve(model: &OuModel, t_max: f64) -> Result<TimeCurve> {
    if !(t_max > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {t_max}")));
    }
    model.check_sigma(t_max)?;
    let n = 513usize;
    let h = t_max / (n - 1) as f64;
    let mut ts = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for (i, t) in ts.iter_mut().enumerate() {
        *t = if i == n - 1 { t_max } else { i as f64 * h };
    }
    ws[n - 1] = model.q.value(t_max) - model.r.value(t_max);
    let rhs = |t: f64, w: f64| riccati_rhs(model, t, w);
    for i in (0..n - 1).rev() {
        let sol = ode::solve_scalar(&rhs, ts[i + 1], ts[i], ws[i + 1], 1e-12, 1e-12, 1e6)?;
        ws[i] = *sol.ys.last().unwrap();
    }
    let knots: Vec<(f64, f64)> = ts.into_iter().zip(ws).collect();
    TimeCurve::sampled(&knots)
}

/// Closed-form Riccati solution for the exponential curve family
/// r = r0 e^{-rk t}, q = q0 constant, sigma = s0 e^{-sk t}. The exact
/// solution is q(t) - r(t) minus a correction involving an exponential
/// integral of (typically large negative) integer order; the correction is
/// applied when representable. Returns (w, log10 of |correction|).
pub fn ou_exponential_family_w(t: f64, r0: f64, rk: f64, q0: f64, sk: f64) -> Result<(f64, f64)> {
    if rk <= 0.0 {
        return Err(Error::domain("the closed form needs a positive rate decay"));
    }
    let nu = 1.0 + 2.0 * (q0 - sk) / rk;
    let m = -nu;
    if (m - m.round()).abs() > 1e-6 || m.round() < 0.0 {
        return Err(Error::domain(format!(
            "closed-form correction needs a nonpositive integer order, got nu = {nu}"
        )));
    }
    let z = -2.0 * (r0 / rk) * (-rk * t).exp();
    let (sign, log_mag) = expint_neg_int(m.round() as u32, z)?;
    // correction = rk e^{z} / E_nu(z); log magnitude in natural log.
    let log_corr = rk.ln() + z - log_mag;
    let base = q0 - r0 * (-rk * t).exp();
    let corr = if log_corr < 700.0 { sign * log_corr.exp() } else { f64::INFINITY };
    Ok((base - corr, log_corr / std::f64::consts::LN_10))
}

/// Immutable bundle of the OU change of variables for one horizon.
#[derive(Debug, Clone)]
pub struct OuTransform {
    t_max: f64,
    pub r: TimeCurve,
    pub q: TimeCurve,
    pub sigma: TimeCurve,
    pub w: TimeCurve,
    w_cum: CachedCumulative,
    r_cum: CachedCumulative,
    q_cum: CachedCumulative,
    theta_cum: CachedCumulative,
}

/// Builds the cached transform maps from the model curves and a Riccati
/// solution `w`. Verifies that `w` actually solves its equation and that
/// the time change is strictly monotone.
pub fn ou_build_transform(
    model: &OuModel,
    w: &TimeCurve,
    t_max: f64,
    nodes: usize,
) -> Result<OuTransform> {
    if !(t_max > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {t_max}")));
    }
    model.check_sigma(t_max)?;
    for i in 0..=64 {
        let t = t_max * i as f64 / 64.0;
        let resid = w.deriv(t) - riccati_rhs(model, t, w.value(t));
        if !(resid.abs() <= 1e-8) {
            return Err(Error::model(format!(
                "w does not solve the drift-reduction equation: residual {resid:.3e} at t = {t}"
            )));
        }
    }
    let w_cum = CachedCumulative::build(|t| w.value(t), t_max, nodes)?;
    let r_cum = CachedCumulative::build(|t| model.r.value(t), t_max, nodes)?;
    let q_cum = CachedCumulative::build(|t| model.q.value(t), t_max, nodes)?;
    let w_total = w_cum.total();
    let sigma = model.sigma.clone();
    let theta_cum = CachedCumulative::build(
        |t| {
            let s = sigma.value(t);
            let g = (w_cum.eval(t) - w_total).exp();
            s * s * g * g
        },
        t_max,
        nodes,
    )?;
    if !theta_cum.is_strictly_increasing() {
        return Err(Error::model(
            "time change is not strictly monotone; sigma g vanishes on a subinterval".to_string(),
        ));
    }
    Ok(OuTransform {
        t_max,
        r: model.r.clone(),
        q: model.q.clone(),
        sigma: model.sigma.clone(),
        w: w.clone(),
        w_cum,
        r_cum,
        q_cum,
        theta_cum,
    })
}

impl OuTransform {
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Spatial scale factor g(t) = e^{int_T^t w ds}, normalized to g(T) = 1.
    pub fn g(&self, t: f64) -> f64 {
        (self.w_cum.eval(t) - self.w_cum.total()).exp()
    }

    pub fn g_deriv(&self, t: f64) -> f64 {
        self.w.value(t) * self.g(t)
    }

    /// Transformed time tau(t) = (1/2) int_t^T sigma^2 g^2 ds, decreasing
    /// from tau(0) to tau(T) = 0.
    pub fn tau_of_t(&self, t: f64) -> f64 {
        0.5 * (self.theta_cum.total() - self.theta_cum.eval(t))
    }

    pub fn tau_max(&self) -> f64 {
        0.5 * self.theta_cum.total()
    }

    pub fn t_of_tau(&self, tau: f64) -> Result<f64> {
        self.theta_cum.invert_increasing(self.theta_cum.total() - 2.0 * tau)
    }

    pub fn tau_deriv(&self, t: f64) -> f64 {
        let s = self.sigma.value(t);
        let g = self.g(t);
        -0.5 * s * s * g * g
    }

    /// Quadratic coefficient of the value weight; identically zero for the
    /// standard drift-matching solution w = q - r.
    pub fn a_coeff(&self, t: f64) -> f64 {
        let g = self.g(t);
        let s = self.sigma.value(t);
        (self.w.value(t) + self.r.value(t) - self.q.value(t)) / (g * g * s * s)
    }

    /// Spatially constant part of the value exponent f(t, x).
    pub fn f0(&self, t: f64) -> f64 {
        let wt = self.w_cum.eval(t) - self.w_cum.total();
        let rt = self.r_cum.eval(t) - self.r_cum.total();
        let qt = self.q_cum.eval(t) - self.q_cum.total();
        0.5 * wt + 0.5 * (3.0 * rt - qt)
    }

    /// Value exponent: the option price is C = u e^{f} with
    /// f(t, x) = f0(t) - a(t) x^2 / 2.
    pub fn f(&self, t: f64, x: f64) -> f64 {
        self.f0(t) - 0.5 * self.a_coeff(t) * x * x
    }

    /// e^{int_t^T r ds}, the forward value of one unit of cash at maturity.
    pub fn forward_discount(&self, t: f64) -> f64 {
        (self.r_cum.total() - self.r_cum.eval(t)).exp()
    }

    /// e^{int_t^T q ds}, the carry factor of the underlying.
    pub fn forward_carry(&self, t: f64) -> f64 {
        (self.q_cum.total() - self.q_cum.eval(t)).exp()
    }

    pub fn x_of_s(&self, t: f64, spot: f64) -> f64 {
        spot * self.g(t)
    }

    pub fn s_of_x(&self, t: f64, x: f64) -> f64 {
        x / self.g(t)
    }
}
