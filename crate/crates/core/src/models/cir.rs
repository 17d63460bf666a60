//! Substitution for the square-root short-rate model
//! dr = kappa (theta - r) dt + sigma sqrt(r) dW. The rate maps to
//! z = g(t) sqrt(r), prices carry e^{a r + int_t^T a kappa theta}, and
//! forward values solve the radial equation u_tau = 1/2 u_zz + (b/z) u_z
//! with b = m - 1/2, where m = 2 kappa theta / sigma^2 must be a positive
//! integer for the eigenfunction machinery to close.

use crate::error::{Error, Result};
use crate::models::cache::CachedCumulative;
use crate::models::curve::TimeCurve;
use crate::models::zcb::backward_ode_samples;

/// Short-rate dynamics with time-dependent coefficient curves.
#[derive(Debug, Clone)]
pub struct CirModel {
    pub kappa: TimeCurve,
    pub theta: TimeCurve,
    pub sigma: TimeCurve,
}

/// Cached substitution data for one model and horizon.
#[derive(Debug, Clone)]
pub struct CirTransform {
    t_max: f64,
    m: u32,
    pub kappa: TimeCurve,
    pub theta: TimeCurve,
    pub sigma: TimeCurve,
    a_curve: TimeCurve,
    g_cum: CachedCumulative,
    ca_cum: CachedCumulative,
    theta_cum: CachedCumulative,
}

/// Builds the substitution caches over [0, t_max], checking admissibility.
pub fn cir_build_transform(model: &CirModel, t_max: f64, nodes: usize) -> Result<CirTransform> {
    if !(t_max > 0.0) {
        return Err(Error::domain(format!(
            "horizon must be positive, got {t_max}"
        )));
    }
    let m_of = |t: f64| {
        let s = model.sigma.value(t);
        2.0 * model.kappa.value(t) * model.theta.value(t) / (s * s)
    };
    let m_round = m_of(0.0).round();
    let mut max_dev = 0.0f64;
    for i in 0..=64 {
        let t = t_max * i as f64 / 64.0;
        let s = model.sigma.value(t);
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain(format!(
                "rate volatility must stay positive, got {s} at t = {t}"
            )));
        }
        max_dev = max_dev.max((m_of(t) - m_round).abs());
    }
    if !(m_round >= 1.0) || max_dev > 1e-10 {
        return Err(Error::domain(format!(
            "2 kappa theta / sigma^2 must stay at a positive integer; \
             nearest is {m_round} with maximum deviation {max_dev:.3e}"
        )));
    }
    let rhs = |t: f64, a: f64| {
        let s = model.sigma.value(t);
        1.0 + model.kappa.value(t) * a - 0.5 * s * s * a * a
    };
    let a_knots = backward_ode_samples(&rhs, t_max, 0.0, nodes.max(8))?;
    let a_curve = TimeCurve::sampled(&a_knots)?;
    let g_cum = CachedCumulative::build(
        |t| {
            let s = model.sigma.value(t);
            0.5 * (model.kappa.value(t) - a_curve.value(t) * s * s)
        },
        t_max,
        nodes,
    )?;
    let ca_cum = CachedCumulative::build(
        |t| a_curve.value(t) * model.kappa.value(t) * model.theta.value(t),
        t_max,
        nodes,
    )?;
    let theta_cum = CachedCumulative::build(
        |t| {
            let s = model.sigma.value(t);
            let g = g_cum.eval(t).exp();
            s * s * g * g
        },
        t_max,
        nodes,
    )?;
    if !theta_cum.is_strictly_increasing() {
        return Err(Error::domain(
            "time change is not strictly monotone".to_string(),
        ));
    }
    Ok(CirTransform {
        t_max,
        m: m_round as u32,
        kappa: model.kappa.clone(),
        theta: model.theta.clone(),
        sigma: model.sigma.clone(),
        a_curve,
        g_cum,
        ca_cum,
        theta_cum,
    })
}

impl CirTransform {
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Integer dimension parameter m = 2 kappa theta / sigma^2.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Radial drift coefficient b = m - 1/2.
    pub fn b_coeff(&self) -> f64 {
        self.m as f64 - 0.5
    }

    /// Value-exponent slope a(t), a(t_max) = 0, solving
    /// a' = 1 + kappa a - 1/2 sigma^2 a^2 backward.
    pub fn a(&self, t: f64) -> f64 {
        self.a_curve.value(t)
    }

    pub fn a_deriv(&self, t: f64) -> f64 {
        let s = self.sigma.value(t);
        let a = self.a(t);
        1.0 + self.kappa.value(t) * a - 0.5 * s * s * a * a
    }

    /// Radial scale g(t) = e^{1/2 int_0^t (kappa - a sigma^2)}, g(0) = 1.
    pub fn g(&self, t: f64) -> f64 {
        self.g_cum.eval(t).exp()
    }

    pub fn g_deriv(&self, t: f64) -> f64 {
        let s = self.sigma.value(t);
        0.5 * (self.kappa.value(t) - self.a(t) * s * s) * self.g(t)
    }

    /// Remaining diffusion time tau(t) = 1/4 int_t^T sigma^2 g^2.
    pub fn tau_of_t(&self, t: f64) -> f64 {
        0.25 * (self.theta_cum.total() - self.theta_cum.eval(t))
    }

    pub fn tau_max(&self) -> f64 {
        0.25 * self.theta_cum.total()
    }

    pub fn t_of_tau(&self, tau: f64) -> Result<f64> {
        self.theta_cum
            .invert_increasing(self.theta_cum.total() - 4.0 * tau)
    }

    pub fn tau_deriv(&self, t: f64) -> f64 {
        let s = self.sigma.value(t);
        let g = self.g(t);
        -0.25 * s * s * g * g
    }

    /// Radial coordinate z = g(t) sqrt(r); the rate must be nonnegative.
    pub fn z_of_rate(&self, t: f64, r: f64) -> f64 {
        self.g(t) * r.sqrt()
    }

    pub fn rate_of_z(&self, t: f64, z: f64) -> f64 {
        let w = z / self.g(t);
        w * w
    }

    /// Price factor e^{a r + int_t^T a kappa theta}, equal to one at the
    /// horizon for every rate.
    pub fn value_factor(&self, t: f64, r: f64) -> f64 {
        (self.a(t) * r + self.ca_cum.total() - self.ca_cum.eval(t)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::zcb::affine_zcb_cir;
    use crate::specfun::bessel::bessel_j;

    fn admissible_model(m: u32) -> CirModel {
        let (kappa, theta) = (0.5, 0.05);
        let sigma = (2.0 * kappa * theta / m as f64).sqrt();
        CirModel {
            kappa: TimeCurve::Constant(kappa),
            theta: TimeCurve::Constant(theta),
            sigma: TimeCurve::Constant(sigma),
        }
    }

    #[test]
    fn admissibility_is_enforced_with_the_deviation_quoted() {
        let bad = CirModel {
            kappa: TimeCurve::Constant(0.5),
            theta: TimeCurve::Constant(0.05),
            sigma: TimeCurve::Constant(0.2),
        };
        let msg = cir_build_transform(&bad, 1.0, 256).unwrap_err().to_string();
        assert!(msg.contains("positive integer"), "{msg}");
        assert!(msg.contains("deviation"), "{msg}");
        for m in [1, 2, 3] {
            let tr = cir_build_transform(&admissible_model(m), 1.0, 256).unwrap();
            assert_eq!(tr.m(), m);
        }
    }

    #[test]
    fn exponent_slope_solves_its_equation_and_vanishes_at_the_horizon() {
        let tr = cir_build_transform(&admissible_model(1), 1.0, 512).unwrap();
        assert!(tr.a(1.0).abs() < 1e-12);
        assert!((tr.g(0.0) - 1.0).abs() < 1e-14);
        assert!(tr.tau_of_t(1.0).abs() < 1e-16);
        let h = 1e-5;
        for i in 1..10 {
            let t = 0.9 * i as f64 / 10.0 + 0.05;
            let fd = (tr.a(t + h) - tr.a(t - h)) / (2.0 * h);
            assert!((fd - tr.a_deriv(t)).abs() < 1e-6, "t = {t}");
        }
    }

    #[test]
    fn exponent_slope_equals_the_bond_exponent_for_the_same_horizon() {
        let model = admissible_model(2);
        let tr = cir_build_transform(&model, 1.0, 512).unwrap();
        let zcb = affine_zcb_cir(&model.kappa, &model.theta, &model.sigma, 1.0, 512).unwrap();
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            assert!((tr.a(t) - zcb.b(t)).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn time_of_clock_round_trips() {
        let tr = cir_build_transform(&admissible_model(1), 1.0, 512).unwrap();
        for i in 0..=25 {
            let tau = tr.tau_max() * i as f64 / 25.0;
            let t = tr.t_of_tau(tau).unwrap();
            assert!((tr.tau_of_t(t) - tau).abs() < 1e-10 * tr.tau_max().max(1e-3));
        }
    }

    #[test]
    fn value_factor_is_one_at_the_horizon() {
        let tr = cir_build_transform(&admissible_model(2), 1.0, 512).unwrap();
        for &r in &[0.0, 0.04, 0.2] {
            assert!((tr.value_factor(1.0, r) - 1.0).abs() < 1e-12, "r = {r}");
        }
    }

    #[test]
    fn radial_heat_solutions_map_to_rate_pde_solutions() {
        // For dimension m the radial solutions are
        // u = z^{1-m} J_{m-1}(k z) e^{-k^2 tau / 2}; the mapped price
        // V = u e^{a r + int_t^T a kappa theta} must solve
        // V_t + 1/2 sigma^2 r V_rr + kappa (theta - r) V_r - r V = 0.
        let k = 0.5f64;
        for m in [1u32, 2u32] {
            let model = admissible_model(m);
            let tr = cir_build_transform(&model, 1.0, 512).unwrap();
            let order = (m - 1) as f64;
            let price = |r: f64, t: f64| {
                let z = tr.z_of_rate(t, r);
                let radial = z.powf(1.0 - m as f64) * bessel_j(order, k * z).unwrap();
                radial * (-0.5 * k * k * tr.tau_of_t(t)).exp() * tr.value_factor(t, r)
            };
            let (hr, ht) = (1e-5, 1e-5);
            for &(r, t) in &[(0.03, 0.25), (0.08, 0.5), (0.15, 0.8)] {
                let v_t = (price(r, t + ht) - price(r, t - ht)) / (2.0 * ht);
                let v_r = (price(r + hr, t) - price(r - hr, t)) / (2.0 * hr);
                let v_rr = (price(r + hr, t) - 2.0 * price(r, t) + price(r - hr, t)) / (hr * hr);
                let s = model.sigma.value(t);
                let resid = v_t
                    + 0.5 * s * s * r * v_rr
                    + model.kappa.value(t) * (model.theta.value(t) - r) * v_r
                    - r * price(r, t);
                assert!(resid.abs() < 2e-5, "m = {m}, (r, t) = ({r}, {t}): {resid}");
            }
        }
    }
}
