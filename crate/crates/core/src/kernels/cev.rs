//! Radial Bessel kernels of the power-transformed elasticity problem.
//!
//! On the radial domain (0, y) the transformed operator has eigenfunctions
//! z^m J_m(mu_n z / y) with m = |nu| and mu_n the positive zeros of J_m.
//! The wall-derivative kernel and the source inner integral are spectral
//! sums over those zeros; each term of the inner integral is a power-law
//! Bessel moment, evaluated by a hypergeometric closed form for short
//! arguments, adaptive quadrature in a middle band, and an
//! integration-by-parts descent for long arguments.

use crate::error::{Error, Result};
use crate::num::quad;
use crate::specfun::{bessel_j, bessel_zeros, gamma, hyp1f2, SeriesControl};

/// Exponent of the spectral damping factor beyond which the remaining
/// tail of a zero table is negligible at double precision.
const TAIL_EXPONENT: f64 = 45.0;

/// Precomputed spectral table for one Bessel order: the zeros mu_n of
/// J_m together with the wall weights of the derivative kernel.
#[derive(Debug, Clone)]
pub struct CevZeros {
    nu: f64,
    abs_nu: f64,
    zeros: Vec<f64>,
    /// [(|nu| + nu) J_m(mu_n) + mu_n J_{m-1}(mu_n)] / J_{m+1}(mu_n)^2,
    /// with J_{m-1} obtained from the three-term recurrence.
    weights: Vec<f64>,
}

impl CevZeros {
    /// Build the table for the signed order `nu` with `count` zeros of
    /// J_{|nu|}.
    pub fn new(nu: f64, count: usize) -> Result<Self> {
        if nu == 0.0 || !nu.is_finite() {
            return Err(Error::domain(format!(
                "spectral table needs a nonzero finite order, got {nu}"
            )));
        }
        let abs_nu = nu.abs();
        let zeros = bessel_zeros(abs_nu, count)?;
        let mut weights = Vec::with_capacity(count);
        for &mu in &zeros {
            let jm = bessel_j(abs_nu, mu)?;
            let jp = bessel_j(abs_nu + 1.0, mu)?;
            let j_prev = 2.0 * abs_nu / mu * jm - jp;
            let bracket = (abs_nu + nu) * jm + mu * j_prev;
            weights.push(bracket / (jp * jp));
        }
        Ok(CevZeros {
            nu,
            abs_nu,
            zeros,
            weights,
        })
    }

    /// Signed order the table was built for.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Bessel order m = |nu| of the eigenfunctions.
    pub fn abs_nu(&self) -> f64 {
        self.abs_nu
    }

    /// Number of zeros in the table.
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    /// Whether the table is empty (never true for a constructed table).
    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// The zeros themselves.
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }
}

/// Number of zeros needed so that the spectral tail exponent
/// mu_N^2 delta / y^2 reaches its negligible level at the smallest time
/// separation a caller will use.
pub fn zeros_needed(abs_nu: f64, y: f64, delta_min: f64) -> usize {
    let mu_max = y * (TAIL_EXPONENT / delta_min).sqrt();
    let n = mu_max / std::f64::consts::PI - 0.5 * abs_nu + 0.25;
    (n.ceil() as usize).max(8) + 2
}

/// Wall-derivative kernel of the radial problem,
/// 2 xi^m y^(m-2) sum_n w_n J_m(mu_n xi / y) exp(-mu_n^2 delta / y^2).
///
/// Fails with a truncation error when the table is too short for the
/// requested time separation; [`zeros_needed`] sizes tables up front.
pub fn cev_b1(xi: f64, y_tau: f64, delta: f64, zeros: &CevZeros) -> Result<f64> {
    if !(y_tau > 0.0) || !(delta > 0.0) || !(xi >= 0.0) {
        return Err(Error::domain(format!(
            "radial wall kernel needs y > 0, delta > 0, xi >= 0; \
             got y = {y_tau}, delta = {delta}, xi = {xi}"
        )));
    }
    let m = zeros.abs_nu;
    let ratio = delta / (y_tau * y_tau);
    let mut sum = 0.0;
    let mut exponent = 0.0;
    for (&mu, &w) in zeros.zeros.iter().zip(&zeros.weights) {
        exponent = mu * mu * ratio;
        if exponent > TAIL_EXPONENT {
            let prefactor = 2.0 * xi.powf(m) * y_tau.powf(m - 2.0);
            return Ok(prefactor * sum);
        }
        sum += w * bessel_j(m, mu * xi / y_tau)? * (-exponent).exp();
    }
    Err(Error::Truncation {
        context: format!(
            "radial wall kernel needs more zeros: delta / y^2 = {ratio:.3e} \
             reaches exponent {exponent:.1} after {} terms",
            zeros.len()
        ),
        terms_used: zeros.len(),
        last_term: (-exponent).exp(),
    })
}

/// Power-law Bessel moment int_0^upper t^a J_m(c t) dt.
///
/// Uses the 1F2 closed form for c * upper <= 12, adaptive quadrature up
/// to c * upper = 200, and beyond that the full-line moment minus an
/// integration-by-parts tail expansion, whose steps trade one power of t
/// for one power of 1 / (c * upper).
pub fn bessel_moment(a: f64, m: f64, c: f64, upper: f64) -> Result<f64> {
    if !(c > 0.0) || !(upper > 0.0) {
        return Err(Error::domain(format!(
            "bessel moment needs c > 0 and upper > 0, got c = {c}, upper = {upper}"
        )));
    }
    if a + m + 1.0 <= 0.0 {
        return Err(Error::domain(format!(
            "bessel moment diverges at the origin for a + m + 1 <= 0 \
             (a = {a}, m = {m})"
        )));
    }
    let x = c * upper;
    if x <= 12.0 {
        let alpha = 0.5 * (a + m + 1.0);
        let ctl = SeriesControl {
            max_terms: 400,
            abs_tol: 1e-18,
            report_terms_used: false,
        };
        let f = hyp1f2(alpha, m + 1.0, alpha + 1.0, -0.25 * x * x, &ctl)?;
        return Ok(
            upper.powf(a + 1.0) * (0.5 * x).powf(m) / (gamma(m + 1.0) * (a + m + 1.0)) * f.value
        );
    }
    if x <= 200.0 {
        let result = quad::integrate(
            &|t: f64| t.powf(a) * bessel_j(m, c * t).unwrap(),
            0.0,
            upper,
            1e-13,
            1e-13,
        );
        return Ok(result.value);
    }
    // Split as int_0^inf minus the tail int_upper^inf. The full-line
    // moment has the closed form 2^a Gamma((a+m+1)/2) / Gamma((m+1-a)/2)
    // / c^(a+1), taken in the regularized sense for a >= 1/2, and the
    // reciprocal gamma turns its poles into exact zeros. The tail admits
    // the endpoint descent T(a, m) = -upper^a J_{m+1}(x) / c
    // - ((a - m - 1) / c) T(a-1, m+1), a sum whose term ratio is bounded
    // by |a - m - 1 - 2k| / x.
    let smooth = 2.0f64.powf(a) * gamma(0.5 * (a + m + 1.0))
        * crate::specfun::recip_gamma(0.5 * (m + 1.0 - a))
        / c.powf(a + 1.0);
    let mut j_prev = bessel_j(m, x)?;
    let mut j_curr = bessel_j(m + 1.0, x)?;
    let mut merged = upper.powf(a) / c;
    let mut sum = 0.0;
    for k in 0..40 {
        let kf = k as f64;
        let term = merged * j_curr;
        sum += term;
        if term.abs() < 1e-16 * (smooth + sum).abs().max(1e-300) {
            return Ok(smooth + sum);
        }
        merged *= -(a - m - 1.0 - 2.0 * kf) / x;
        let p = m + 1.0 + kf;
        let j_next = 2.0 * p / x * j_curr - j_prev;
        j_prev = j_curr;
        j_curr = j_next;
    }
    Err(Error::Truncation {
        context: format!("bessel moment descent stalled (a = {a}, m = {m}, c upper = {x:.1})"),
        terms_used: 40,
        last_term: merged.abs(),
    })
}

/// Source inner integral of the radial problem,
/// int_0^{y_s} (c_a xi + c_b / xi) xi^(2b) K(xi) dxi with
/// K(xi) = xi^(2b') ... the wall-derivative kernel over y_tau, evaluated
/// term by term through power-law Bessel moments. The weight exponent
/// 2b = 1 - 2m comes from the table's order.
pub fn cev_lambda_inner(
    y_tau: f64,
    y_s: f64,
    delta: f64,
    c_a: f64,
    c_b: f64,
    zeros: &CevZeros,
) -> Result<f64> {
    if !(y_tau > 0.0) || !(y_s > 0.0) || !(delta > 0.0) {
        return Err(Error::domain(format!(
            "radial source integral needs positive levels and separation; \
             got y_tau = {y_tau}, y_s = {y_s}, delta = {delta}"
        )));
    }
    let m = zeros.abs_nu;
    let two_b = 1.0 + 2.0 * zeros.nu;
    let a_growth = two_b + m + 1.0;
    let a_decay = two_b + m - 1.0;
    let ratio = delta / (y_tau * y_tau);
    let prefactor = 2.0 * y_tau.powf(m - 3.0);
    let mut sum = 0.0;
    let mut exponent = 0.0;
    for (&mu, &w) in zeros.zeros.iter().zip(&zeros.weights) {
        exponent = mu * mu * ratio;
        if exponent > TAIL_EXPONENT {
            return Ok(prefactor * sum);
        }
        let c = mu / y_tau;
        let mut inner = 0.0;
        if c_a != 0.0 {
            inner += c_a * bessel_moment(a_growth, m, c, y_s)?;
        }
        if c_b != 0.0 {
            inner += c_b * bessel_moment(a_decay, m, c, y_s)?;
        }
        sum += w * (-exponent).exp() * inner;
    }
    if c_a == 0.0 && c_b == 0.0 {
        return Ok(0.0);
    }
    Err(Error::Truncation {
        context: format!(
            "radial source integral needs more zeros: delta / y^2 = {ratio:.3e} \
             reaches exponent {exponent:.1} after {} terms",
            zeros.len()
        ),
        terms_used: zeros.len(),
        last_term: (-exponent).exp(),
    })
}
