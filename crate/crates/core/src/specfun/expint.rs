//! Generalized exponential integral E_nu(z) = int_1^inf e^{-z t} t^{-nu} dt
//! for real order, through the upper incomplete gamma relation
//! E_nu(z) = z^{nu-1} Gamma(1 - nu, z).

use crate::error::{Error, Result};
use crate::specfun::gamma::{gamma_upper, lgamma};

/// E_nu(z) for z > 0 and any real order.
pub fn expint_nu(order: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!(
            "expint_nu requires z > 0, got z = {z}"
        )));
    }
    let g = gamma_upper(1.0 - order, z)?;
    Ok(z.powf(order - 1.0) * g)
}

/// E_{-m}(z) for integer m >= 0 and z != 0 of either sign, via the exact
/// terminating form E_{-m}(z) = e^{-z} sum_{k=0}^m (m!/(m-k)!) z^{-k-1}.
/// This is the real analytic continuation to negative arguments that the
/// closed-form Riccati solution of the exponential parameter family needs.
/// Returns (sign, log magnitude) so that huge values (small |z|, large m)
/// stay representable.
pub fn expint_neg_int(m: u32, z: f64) -> Result<(f64, f64)> {
    if z == 0.0 {
        return Err(Error::domain("expint_neg_int requires z != 0"));
    }
    // Sum in log space off the dominant k = m term to dodge overflow.
    // t_k = m!/(m-k)! z^{-k-1}; |t_m| = m! |z|^{-m-1}.
    let log_dom = lgamma(m as f64 + 1.0) - (m as f64 + 1.0) * z.abs().ln();
    let mut scaled = 0.0f64;
    // t_k / |t_m| = |z|^{m-k} sign(z)^{-k-1} / (m-k)!
    for k in 0..=m {
        let j = (m - k) as f64;
        let log_ratio = j * z.abs().ln() - lgamma(j + 1.0);
        let sign = if z > 0.0 {
            1.0
        } else if (k + 1) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        scaled += sign * log_ratio.exp();
    }
    if scaled == 0.0 {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    let log_mag = log_dom + scaled.abs().ln() - z;
    Ok((scaled.signum(), log_mag))
}
