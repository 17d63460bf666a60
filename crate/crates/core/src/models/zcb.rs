//! Zero-coupon bond prices in the exponentially affine short-rate models:
//! F(r, t, Q) = A(t, Q) e^{B(t, Q) r}, with A and B built from the model
//! curves once per bond maturity and cached.

use crate::error::{Error, Result};
use crate::models::cache::CachedCumulative;
use crate::models::curve::TimeCurve;
use crate::num::ode;

/// Short-rate dynamics behind an affine bond price.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineKind {
    /// dr = kappa (theta - r) dt + sigma dW.
    HullWhite,
    /// dr = kappa (theta - r) dt + sigma sqrt(r) dW.
    Cir,
}

/// Cached affine bond price for one bond maturity.
#[derive(Debug, Clone)]
pub struct AffineZcb {
    kind: AffineKind,
    q_maturity: f64,
    kappa: TimeCurve,
    theta: TimeCurve,
    sigma: TimeCurve,
    /// B(t, Q) as a dense sampled curve on [0, Q].
    b_curve: TimeCurve,
    /// Cumulative of the log A integrand from 0; log A(t) is a difference.
    log_a_cum: CachedCumulative,
    log_a_total: f64,
}

/// Integrates a scalar ODE backward from `t_end` across a uniform grid,
/// returning knots in forward order. Shared by the affine B functions and
/// the square-root model's value-exponent equation.
pub(crate) fn backward_ode_samples<F: Fn(f64, f64) -> f64>(
    rhs: &F,
    t_end: f64,
    y_end: f64,
    n: usize,
) -> Result<Vec<(f64, f64)>> {
    let h = t_end / (n - 1) as f64;
    let mut out = vec![(0.0, 0.0); n];
    out[n - 1] = (t_end, y_end);
    for i in (0..n - 1).rev() {
        let t_hi = out[i + 1].0;
        let t_lo = if i == 0 { 0.0 } else { i as f64 * h };
        let sol = ode::solve_scalar(rhs, t_hi, t_lo, out[i + 1].1, 1e-12, 1e-12, 1e9)?;
        out[i] = (t_lo, *sol.ys.last().unwrap());
    }
    Ok(out)
}

fn build(
    kind: AffineKind,
    kappa: &TimeCurve,
    theta: &TimeCurve,
    sigma: &TimeCurve,
    q_maturity: f64,
    nodes: usize,
) -> Result<AffineZcb> {
    if !(q_maturity > 0.0) {
        return Err(Error::domain(format!(
            "bond maturity must be positive, got {q_maturity}"
        )));
    }
    let b_knots = match kind {
        AffineKind::HullWhite => {
            // B' = kappa B + 1, B(Q) = 0, solved in closed form through the
            // integrating factor psi = e^{int kappa}.
            let k_cum = CachedCumulative::build(|t| kappa.value(t), q_maturity, nodes)?;
            let p_cum = CachedCumulative::build(|t| (-k_cum.eval(t)).exp(), q_maturity, nodes)?;
            let n = nodes.max(8);
            (0..n)
                .map(|i| {
                    let t = if i == n - 1 {
                        q_maturity
                    } else {
                        q_maturity * i as f64 / (n - 1) as f64
                    };
                    (t, k_cum.eval(t).exp() * (p_cum.eval(t) - p_cum.total()))
                })
                .collect()
        }
        AffineKind::Cir => {
            let rhs = |t: f64, b: f64| {
                let s = sigma.value(t);
                1.0 + kappa.value(t) * b - 0.5 * s * s * b * b
            };
            backward_ode_samples(&rhs, q_maturity, 0.0, nodes.max(8))?
        }
    };
    let b_curve = TimeCurve::sampled(&b_knots)?;
    let log_a_cum = match kind {
        AffineKind::HullWhite => CachedCumulative::build(
            |t| {
                let b = b_curve.value(t);
                let s = sigma.value(t);
                -0.5 * b * (2.0 * theta.value(t) * kappa.value(t) + b * s * s)
            },
            q_maturity,
            nodes,
        )?,
        AffineKind::Cir => CachedCumulative::build(
            |t| -b_curve.value(t) * theta.value(t) * kappa.value(t),
            q_maturity,
            nodes,
        )?,
    };
    let log_a_total = log_a_cum.total();
    Ok(AffineZcb {
        kind,
        q_maturity,
        kappa: kappa.clone(),
        theta: theta.clone(),
        sigma: sigma.clone(),
        b_curve,
        log_a_cum,
        log_a_total,
    })
}

/// Bond price function for the Gaussian short-rate model.
pub fn affine_zcb_hull_white(
    kappa: &TimeCurve,
    theta: &TimeCurve,
    sigma: &TimeCurve,
    q_maturity: f64,
    nodes: usize,
) -> Result<AffineZcb> {
    build(AffineKind::HullWhite, kappa, theta, sigma, q_maturity, nodes)
}

/// Bond price function for the square-root short-rate model.
pub fn affine_zcb_cir(
    kappa: &TimeCurve,
    theta: &TimeCurve,
    sigma: &TimeCurve,
    q_maturity: f64,
    nodes: usize,
) -> Result<AffineZcb> {
    build(AffineKind::Cir, kappa, theta, sigma, q_maturity, nodes)
}

impl AffineZcb {
    pub fn kind(&self) -> AffineKind {
        self.kind
    }

    pub fn q_maturity(&self) -> f64 {
        self.q_maturity
    }

    /// Rate-slope exponent B(t, Q), negative before the bond matures.
    pub fn b(&self, t: f64) -> f64 {
        self.b_curve.value(t)
    }

    /// dB/dt from the defining ODE rather than interpolation.
    pub fn b_deriv(&self, t: f64) -> f64 {
        let b = self.b(t);
        match self.kind {
            AffineKind::HullWhite => self.kappa.value(t) * b + 1.0,
            AffineKind::Cir => {
                let s = self.sigma.value(t);
                1.0 + self.kappa.value(t) * b - 0.5 * s * s * b * b
            }
        }
    }

    pub fn log_a(&self, t: f64) -> f64 {
        self.log_a_cum.eval(t) - self.log_a_total
    }

    pub fn a(&self, t: f64) -> f64 {
        self.log_a(t).exp()
    }

    /// d(log A)/dt from the defining integrand.
    pub fn log_a_deriv(&self, t: f64) -> f64 {
        let b = self.b(t);
        match self.kind {
            AffineKind::HullWhite => {
                let s = self.sigma.value(t);
                -0.5 * b * (2.0 * self.theta.value(t) * self.kappa.value(t) + b * s * s)
            }
            AffineKind::Cir => -b * self.theta.value(t) * self.kappa.value(t),
        }
    }

    /// F(r, t, Q).
    pub fn price(&self, r: f64, t: f64) -> f64 {
        (self.log_a(t) + self.b(t) * r).exp()
    }

    /// dF/dr.
    pub fn price_dr(&self, r: f64, t: f64) -> f64 {
        self.b(t) * self.price(r, t)
    }

    /// dF/dt at fixed r.
    pub fn price_dt(&self, r: f64, t: f64) -> f64 {
        self.price(r, t) * (self.log_a_deriv(t) + self.b_deriv(t) * r)
    }

    /// Rate at which the bond price equals `target` at time t.
    pub fn rate_of_price(&self, target: f64, t: f64) -> Result<f64> {
        if !(target > 0.0) {
            return Err(Error::domain(format!(
                "bond price target must be positive, got {target}"
            )));
        }
        let b = self.b(t);
        if b == 0.0 {
            return Err(Error::domain(
                "bond price does not depend on the rate at its maturity".to_string(),
            ));
        }
        Ok((target.ln() - self.log_a(t)) / b)
    }
}
