//! State and time substitution turning the Gaussian short-rate pricing
//! equation into the heat equation with a source. The rate maps to
//! x = r psi + xi, prices carry the factor e^{alpha r + beta}, and the
//! clock runs on tau(t) = 1/2 int_t^T sigma^2 psi^2 ds.

use crate::error::{Error, Result};
use crate::models::cache::CachedCumulative;
use crate::models::curve::TimeCurve;
use crate::models::zcb::AffineZcb;

/// Short-rate dynamics dr = kappa (theta - r) dt + sigma dW with
/// time-dependent coefficient curves.
#[derive(Debug, Clone)]
pub struct HwModel {
    pub kappa: TimeCurve,
    pub theta: TimeCurve,
    pub sigma: TimeCurve,
}

impl HwModel {
    fn check_sigma(&self, t_max: f64) -> Result<()> {
        for i in 0..=64 {
            let t = t_max * i as f64 / 64.0;
            let s = self.sigma.value(t);
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::domain(format!(
                    "rate volatility must stay positive, got {s} at t = {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Coefficients of the heat-equation source written along the mirrored
/// axis: lambda(x) = k0 e^{mu x} (u0 + u1 x).
#[derive(Debug, Clone, Copy)]
pub struct HwSourceCoeffs {
    pub mu: f64,
    pub k0: f64,
    pub u0: f64,
    pub u1: f64,
}

impl HwSourceCoeffs {
    /// Source value at the mirrored coordinate.
    pub fn eval(&self, x_hat: f64) -> f64 {
        self.k0 * (self.mu * x_hat).exp() * (self.u0 + self.u1 * x_hat)
    }
}

/// Cached substitution data for one model and horizon.
#[derive(Debug, Clone)]
pub struct HwTransform {
    t_max: f64,
    pub kappa: TimeCurve,
    pub theta: TimeCurve,
    pub sigma: TimeCurve,
    k_cum: CachedCumulative,
    p_cum: CachedCumulative,
    beta_cum: CachedCumulative,
    xi_cum: CachedCumulative,
    theta_cum: CachedCumulative,
}

/// Builds the substitution caches over [0, t_max].
pub fn hw_build_transform(model: &HwModel, t_max: f64, nodes: usize) -> Result<HwTransform> {
    if !(t_max > 0.0) {
        return Err(Error::domain(format!(
            "horizon must be positive, got {t_max}"
        )));
    }
    model.check_sigma(t_max)?;
    let k_cum = CachedCumulative::build(|t| model.kappa.value(t), t_max, nodes)?;
    let p_cum = CachedCumulative::build(|t| (-k_cum.eval(t)).exp(), t_max, nodes)?;
    let alpha = |t: f64| k_cum.eval(t).exp() * p_cum.eval(t);
    let beta_cum = CachedCumulative::build(
        |t| {
            let a = alpha(t);
            let s = model.sigma.value(t);
            a * (model.kappa.value(t) * model.theta.value(t) + 0.5 * s * s * a)
        },
        t_max,
        nodes,
    )?;
    let xi_cum = CachedCumulative::build(
        |t| {
            let s = model.sigma.value(t);
            (model.kappa.value(t) * model.theta.value(t) + s * s * alpha(t)) * k_cum.eval(t).exp()
        },
        t_max,
        nodes,
    )?;
    let theta_cum = CachedCumulative::build(
        |t| {
            let s = model.sigma.value(t);
            let psi = k_cum.eval(t).exp();
            s * s * psi * psi
        },
        t_max,
        nodes,
    )?;
    if !theta_cum.is_strictly_increasing() {
        return Err(Error::domain(
            "time change is not strictly monotone".to_string(),
        ));
    }
    Ok(HwTransform {
        t_max,
        kappa: model.kappa.clone(),
        theta: model.theta.clone(),
        sigma: model.sigma.clone(),
        k_cum,
        p_cum,
        beta_cum,
        xi_cum,
        theta_cum,
    })
}

impl HwTransform {
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Integrating factor psi(t) = e^{int_0^t kappa}, psi(0) = 1.
    pub fn psi(&self, t: f64) -> f64 {
        self.k_cum.eval(t).exp()
    }

    pub fn psi_deriv(&self, t: f64) -> f64 {
        self.kappa.value(t) * self.psi(t)
    }

    /// Value-exponent slope alpha(t) = psi(t) int_0^t 1/psi, alpha(0) = 0.
    pub fn alpha(&self, t: f64) -> f64 {
        self.psi(t) * self.p_cum.eval(t)
    }

    pub fn alpha_deriv(&self, t: f64) -> f64 {
        self.kappa.value(t) * self.alpha(t) + 1.0
    }

    /// Value-exponent offset beta(t), beta(0) = 0.
    pub fn beta(&self, t: f64) -> f64 {
        -self.beta_cum.eval(t)
    }

    pub fn beta_deriv(&self, t: f64) -> f64 {
        let a = self.alpha(t);
        let s = self.sigma.value(t);
        -a * (self.kappa.value(t) * self.theta.value(t) + 0.5 * s * s * a)
    }

    /// Spatial offset xi(t) in x = r psi + xi, xi(0) = 0.
    pub fn xi(&self, t: f64) -> f64 {
        -self.xi_cum.eval(t)
    }

    pub fn xi_deriv(&self, t: f64) -> f64 {
        let s = self.sigma.value(t);
        -(self.kappa.value(t) * self.theta.value(t) + s * s * self.alpha(t)) * self.psi(t)
    }

    /// Remaining diffusion time tau(t) = 1/2 int_t^T sigma^2 psi^2.
    pub fn tau_of_t(&self, t: f64) -> f64 {
        0.5 * (self.theta_cum.total() - self.theta_cum.eval(t))
    }

    pub fn tau_max(&self) -> f64 {
        0.5 * self.theta_cum.total()
    }

    pub fn t_of_tau(&self, tau: f64) -> Result<f64> {
        self.theta_cum
            .invert_increasing(self.theta_cum.total() - 2.0 * tau)
    }

    pub fn tau_deriv(&self, t: f64) -> f64 {
        let s = self.sigma.value(t);
        let psi = self.psi(t);
        -0.5 * s * s * psi * psi
    }

    /// Exponential rate mu(t) = alpha / psi of the source in x.
    pub fn mu_hat(&self, t: f64) -> f64 {
        self.alpha(t) / self.psi(t)
    }

    /// Forward map x = r psi + xi.
    pub fn x_of_r(&self, t: f64, r: f64) -> f64 {
        r * self.psi(t) + self.xi(t)
    }

    /// Inverse map r = (x - xi) / psi.
    pub fn r_of_x(&self, t: f64, x: f64) -> f64 {
        (x - self.xi(t)) / self.psi(t)
    }

    /// Mirrored coordinate used by the boundary solver, xhat = -x, so that
    /// the continuation region sits to the right of the boundary.
    pub fn x_hat_of_r(&self, t: f64, r: f64) -> f64 {
        -self.x_of_r(t, r)
    }

    pub fn r_of_x_hat(&self, t: f64, x_hat: f64) -> f64 {
        self.r_of_x(t, -x_hat)
    }

    /// Price factor e^{alpha r + beta} relating the heat solution to the
    /// premium over the stopped payoff.
    pub fn value_factor(&self, t: f64, r: f64) -> f64 {
        (self.alpha(t) * r + self.beta(t)).exp()
    }

    /// Boundary gradient scale so that the mirrored gradient datum equals
    /// B(t, Q) times this positive quantity.
    pub fn g_bc(&self, zcb: &AffineZcb, t: f64, r_b: f64) -> f64 {
        let b = zcb.b(t);
        zcb.a(t) / self.psi(t) * ((b - self.alpha(t)) * r_b - self.beta(t)).exp()
    }

    /// Mirrored normal derivative of the heat solution at the boundary,
    /// fixed by smooth fit against the stopped payoff.
    pub fn boundary_gradient_datum(&self, zcb: &AffineZcb, t: f64, r_b: f64) -> f64 {
        zcb.b(t) * self.g_bc(zcb, t, r_b)
    }

    /// Boundary rate recovered from the mirrored gradient datum.
    pub fn r_b_of_gradient(&self, zcb: &AffineZcb, t: f64, psi_hat: f64) -> Result<f64> {
        let b = zcb.b(t);
        let arg = psi_hat * self.psi(t) / (zcb.a(t) * b);
        if !(arg > 0.0) {
            return Err(Error::domain(format!(
                "gradient datum {psi_hat} has the wrong sign for B = {b}"
            )));
        }
        let denom = b - self.alpha(t);
        if denom == 0.0 {
            return Err(Error::domain(
                "boundary rate is not determined where B equals alpha".to_string(),
            ));
        }
        Ok((arg.ln() + self.beta(t)) / denom)
    }

    /// Source coefficients along the mirrored axis for a put struck at
    /// `strike` whose boundary rate and slope at time t are given.
    pub fn source_coeffs(
        &self,
        zcb: &AffineZcb,
        strike: f64,
        t: f64,
        r_b: f64,
        r_b_slope: f64,
    ) -> HwSourceCoeffs {
        let f_b = zcb.price(r_b, t);
        let h = strike - f_b;
        let f_b_dot = f_b * (zcb.log_a_deriv(t) + zcb.b_deriv(t) * r_b + zcb.b(t) * r_b_slope);
        let psi = self.psi(t);
        let s = self.sigma.value(t);
        let mu = self.mu_hat(t);
        HwSourceCoeffs {
            mu,
            k0: 2.0 / (s * s * psi * psi) * (mu * self.xi(t) - self.beta(t)).exp(),
            u0: h * self.xi(t) / psi - f_b_dot,
            u1: h / psi,
        }
    }
}
