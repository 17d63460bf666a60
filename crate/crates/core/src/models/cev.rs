//! Power-map substitution for the constant-elasticity-of-variance spot
//! model dS = (r - q) S dt + sigma S^{beta + 1} dW. The spot maps to
//! x = S^{-beta} / |beta|, a drift-killing factor F gives z = x F(t), and
//! forward values solve the radial heat equation
//! u_tau = u_zz + (2 b / z) u_z on the transformed clock.

use crate::error::{Error, Result};
use crate::models::cache::CachedCumulative;
use crate::models::curve::TimeCurve;

/// Spot dynamics with elasticity exponent beta.
#[derive(Debug, Clone)]
pub struct CevModel {
    pub r: TimeCurve,
    pub q: TimeCurve,
    pub sigma: TimeCurve,
    /// Elasticity exponent; the engine covers beta in (-1, 0), and
    /// beta in (0, 1) builds in mirrored orientation.
    pub beta: f64,
}

impl CevModel {
    fn check(&self, t_max: f64) -> Result<()> {
        let b = self.beta;
        if b == 0.0 {
            return Err(Error::domain(
                "elasticity 0 is the lognormal model; use the constant-volatility pricer"
                    .to_string(),
            ));
        }
        if b == -1.0 {
            return Err(Error::domain(
                "elasticity -1 is the Gaussian spot model; use the ou transform".to_string(),
            ));
        }
        if !(b > -1.0 && b < 1.0) {
            return Err(Error::domain(format!(
                "elasticity must lie in (-1, 0) or (0, 1), got {b}"
            )));
        }
        for i in 0..=64 {
            let t = t_max * i as f64 / 64.0;
            let s = self.sigma.value(t);
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::domain(format!(
                    "volatility must stay positive, got {s} at t = {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Cached substitution data for one model and horizon.
#[derive(Debug, Clone)]
pub struct CevTransform {
    t_max: f64,
    beta: f64,
    pub r: TimeCurve,
    pub q: TimeCurve,
    pub sigma: TimeCurve,
    r_cum: CachedCumulative,
    rq_cum: CachedCumulative,
    theta_cum: CachedCumulative,
}

/// Builds the substitution caches over [0, t_max].
pub fn cev_build_transform(model: &CevModel, t_max: f64, nodes: usize) -> Result<CevTransform> {
    if !(t_max > 0.0) {
        return Err(Error::domain(format!(
            "horizon must be positive, got {t_max}"
        )));
    }
    model.check(t_max)?;
    let beta = model.beta;
    let r_cum = CachedCumulative::build(|t| model.r.value(t), t_max, nodes)?;
    let rq_cum =
        CachedCumulative::build(|t| model.r.value(t) - model.q.value(t), t_max, nodes)?;
    let rq_total = rq_cum.total();
    let theta_cum = CachedCumulative::build(
        |t| {
            let s = model.sigma.value(t);
            s * s * (-2.0 * beta * (rq_total - rq_cum.eval(t))).exp()
        },
        t_max,
        nodes,
    )?;
    if !theta_cum.is_strictly_increasing() {
        return Err(Error::domain(
            "time change is not strictly monotone".to_string(),
        ));
    }
    Ok(CevTransform {
        t_max,
        beta,
        r: model.r.clone(),
        q: model.q.clone(),
        sigma: model.sigma.clone(),
        r_cum,
        rq_cum,
        theta_cum,
    })
}

impl CevTransform {
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Bessel order nu = 1 / (2 beta); negative on the primary branch.
    pub fn nu(&self) -> f64 {
        1.0 / (2.0 * self.beta)
    }

    pub fn abs_nu(&self) -> f64 {
        self.nu().abs()
    }

    /// Radial drift coefficient b = (beta + 1) / (2 beta) in
    /// u_tau = u_zz + (2 b / z) u_z.
    pub fn b_coeff(&self) -> f64 {
        (self.beta + 1.0) / (2.0 * self.beta)
    }

    /// True when beta lies in (0, 1): the power map then reverses
    /// orientation and the boundary solver would run on reflected
    /// coordinates.
    pub fn mirrored(&self) -> bool {
        self.beta > 0.0
    }

    /// Power map x = S^{-beta} / |beta|.
    pub fn x_of_spot(&self, spot: f64) -> f64 {
        spot.powf(-self.beta) / self.beta.abs()
    }

    /// Inverse power map S = (|beta| x)^{-1/beta}.
    pub fn spot_of_x(&self, x: f64) -> f64 {
        (self.beta.abs() * x).powf(-1.0 / self.beta)
    }

    /// Drift-killing factor F(t) = e^{-beta int_t^T (r - q)}, F(T) = 1.
    pub fn f_factor(&self, t: f64) -> f64 {
        (-self.beta * (self.rq_cum.total() - self.rq_cum.eval(t))).exp()
    }

    /// Heat coordinate z = x F(t).
    pub fn z_of_spot(&self, t: f64, spot: f64) -> f64 {
        self.x_of_spot(spot) * self.f_factor(t)
    }

    pub fn spot_of_z(&self, t: f64, z: f64) -> f64 {
        self.spot_of_x(z / self.f_factor(t))
    }

    /// Remaining diffusion time tau(t) = 1/2 int_t^T sigma^2 F^2.
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
        let f = self.f_factor(t);
        -0.5 * s * s * f * f
    }

    /// Compounding factor e^{int_t^T r} carrying prices to forward value.
    pub fn forward_discount(&self, t: f64) -> f64 {
        (self.r_cum.total() - self.r_cum.eval(t)).exp()
    }

    /// Forward-valued exercise premium datum f+ = (S_B - K) e^{int_t^T r}
    /// for a call whose boundary spot at time t is `spot_b`.
    pub fn boundary_value_datum(&self, t: f64, spot_b: f64, strike: f64) -> f64 {
        (spot_b - strike) * self.forward_discount(t)
    }

    /// Boundary gradient of the forward value fixed by smooth fit,
    /// Psi = e^{int_t^T r} S_B^{beta + 1} / F.
    pub fn boundary_gradient_datum(&self, t: f64, spot_b: f64) -> f64 {
        self.forward_discount(t) * spot_b.powf(self.beta + 1.0) / self.f_factor(t)
    }

    /// Boundary spot recovered from the gradient datum in closed form.
    pub fn spot_b_of_gradient(&self, t: f64, psi: f64) -> Result<f64> {
        if !(psi > 0.0) {
            return Err(Error::domain(format!(
                "gradient datum must be positive, got {psi}"
            )));
        }
        let base = psi * self.f_factor(t) / self.forward_discount(t);
        Ok(base.powf(1.0 / (self.beta + 1.0)))
    }
}
