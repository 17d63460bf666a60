//! Bessel J of real order, its positive zeros, and the Bessel theta kernel
//! (the Bessel-process analog of Jacobi theta-3, built on the zeros of
//! J_{|nu|}).
//!
//! J is evaluated by the Maclaurin series up to x = 12 and the Hankel
//! asymptotic expansion beyond; half-integer orders that the heat-kernel
//! reduction exercises get exact closed forms.

use crate::error::{Error, Result};
use crate::specfun::gamma::recip_gamma;
use crate::specfun::{SeriesControl, SeriesValue};
use std::f64::consts::PI;

/// Series/asymptotic crossover for the argument.
const SERIES_LIMIT: f64 = 12.0;

fn is_half_odd_integer(nu: f64) -> Option<i64> {
    let two_nu = 2.0 * nu;
    let rounded = two_nu.round();
    if (two_nu - rounded).abs() < 1e-14 && (rounded as i64) % 2 != 0 {
        Some(rounded as i64)
    } else {
        None
    }
}

/// Maclaurin series sum_k (-1)^k (x/2)^{nu+2k} / (k! Gamma(nu+k+1)).
fn j_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = if nu == 0.0 {
        1.0
    } else {
        (nu * half.ln()).exp() * recip_gamma(nu + 1.0)
    };
    let mut term = lead;
    let mut sum = lead;
    let q = half * half;
    for k in 0..250 {
        let kf = k as f64;
        term *= -q / ((kf + 1.0) * (nu + kf + 1.0));
        let prev = sum;
        sum += term;
        if sum == prev {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion, accurate past x ~ 12 for the moderate
/// orders in scope (terminates exactly for half-integer orders).
fn j_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = x - (0.5 * nu + 0.25) * PI;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last_mag = f64::INFINITY;
    for k in 1..=30 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (8.0 * kf * x);
        let mag = a.abs();
        if mag >= last_mag || mag < 1e-18 {
            if mag < 1e-18 {
                // Converged; fold the final term in by parity below.
            } else {
                break;
            }
        }
        last_mag = mag;
        // k odd contributes to Q, k even to P, with alternating signs
        // within each: P = 1 - a2 + a4 - ..., Q = a1 - a3 + ...
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if mag < 1e-18 {
            break;
        }
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Bessel function of the first kind of real order at x >= 0.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("bessel_j requires x >= 0, got {x}")));
    }
    // Negative integer orders reflect: J_{-n} = (-1)^n J_n.
    if order < 0.0 && order == order.floor() {
        let n = (-order) as i64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * bessel_j(-order, x)?);
    }
    if x == 0.0 {
        return if order == 0.0 {
            Ok(1.0)
        } else if order > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::domain(format!(
                "bessel_j of negative order {order} diverges at x = 0"
            )))
        };
    }
    if let Some(two_nu) = is_half_odd_integer(order) {
        let amp = (2.0 / (PI * x)).sqrt();
        match two_nu {
            1 => return Ok(amp * x.sin()),
            -1 => return Ok(amp * x.cos()),
            3 => return Ok(amp * (x.sin() / x - x.cos())),
            -3 => return Ok(amp * (-x.cos() / x - x.sin())),
            _ => {}
        }
    }
    let v = if x <= SERIES_LIMIT {
        j_series(order, x)
    } else {
        j_asymptotic(order, x)
    };
    if !v.is_finite() {
        return Err(Error::domain(format!(
            "bessel_j({order}, {x}) overflowed during evaluation"
        )));
    }
    Ok(v)
}

/// d/dx J_nu(x) via J_nu'(x) = J_{nu-1}(x) - (nu/x) J_nu(x).
pub fn bessel_j_deriv(order: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::domain("bessel_j_deriv requires x > 0"));
    }
    Ok(bessel_j(order - 1.0, x)? - order / x * bessel_j(order, x)?)
}

/// First `count` positive zeros of J_order for order >= 0, strictly
/// increasing, each with |J(zero)| <= 1e-12.
pub fn bessel_zeros(order: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::domain("bessel_zeros requires count >= 1"));
    }
    if order < 0.0 {
        return Err(Error::domain(format!(
            "bessel_zeros requires a nonnegative order, got {order}"
        )));
    }
    let m = 4.0 * order * order;
    let mut zeros = Vec::with_capacity(count);
    for k in 1..=count {
        let beta = (k as f64 + 0.5 * order - 0.25) * PI;
        let b8 = 8.0 * beta;
        // McMahon expansion through the 1/beta^5 term.
        let mut guess = beta
            - (m - 1.0) / b8
            - 4.0 * (m - 1.0) * (7.0 * m - 31.0) / (3.0 * b8.powi(3))
            - 32.0 * (m - 1.0) * (83.0 * m * m - 982.0 * m + 3779.0) / (15.0 * b8.powi(5));
        if let Some(&prev) = zeros.last() {
            if guess <= prev {
                guess = prev + 0.5 * PI;
            }
        }
        let zero = refine_zero(order, guess, zeros.last().copied(), k)?;
        zeros.push(zero);
    }
    for (i, &z) in zeros.iter().enumerate() {
        let r = bessel_j(order, z)?.abs();
        if r > 1e-12 {
            return Err(Error::RootFinding(format!(
                "zero {} of J_{order} has residual {r:.3e}",
                i + 1
            )));
        }
    }
    Ok(zeros)
}

/// Bracket a sign change around the McMahon guess, then run safeguarded
/// Newton (bisection fallback) to machine precision.
fn refine_zero(order: f64, guess: f64, floor: Option<f64>, index: usize) -> Result<f64> {
    let j = |x: f64| bessel_j(order, x).unwrap_or(f64::NAN);
    let lower_limit = floor.map(|f| f + 1e-9).unwrap_or(1e-9);
    let mut a = (guess - 0.5).max(lower_limit);
    let mut b = guess + 0.5;
    let mut fa = j(a);
    let mut fb = j(b);
    let mut width = 0.5;
    while fa * fb > 0.0 && width < 4.0 {
        width += 0.5;
        a = (guess - width).max(lower_limit);
        b = guess + width;
        fa = j(a);
        fb = j(b);
    }
    if !(fa * fb <= 0.0) || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::RootFinding(format!(
            "could not bracket zero {index} of J_{order} near {guess:.6}"
        )));
    }
    let mut x = guess.clamp(a, b);
    for _ in 0..60 {
        let fx = j(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fa * fx <= 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        let d = bessel_j_deriv(order, x)?;
        let newton = x - fx / d;
        x = if d != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (b - a) < 1e-14 * (1.0 + x.abs()) {
            break;
        }
    }
    let _ = fb;
    Ok(x)
}

/// The unscaled Bessel theta sum
/// 2 (x1 x2)^{|nu|} sum_n e^{-mu_n^2 theta^2}
///     J_{-nu}(mu_n x1) J_{-nu}(mu_n x2) / J_{|nu|+1}(mu_n)^2
/// over the supplied zeros mu_n of J_{|nu|}. The caller applies the 1/y(tau)
/// domain prefactor. Primary branch: nu < 0 so that -nu = |nu|.
pub fn bessel_theta(
    nu: f64,
    theta: f64,
    x1: f64,
    x2: f64,
    zeros: &[f64],
    ctl: &SeriesControl,
) -> Result<SeriesValue> {
    if !(theta >= 0.0) {
        return Err(Error::domain(format!(
            "bessel_theta requires theta >= 0, got {theta}"
        )));
    }
    if !(0.0..=1.0).contains(&x1) || !(0.0..=1.0).contains(&x2) {
        return Err(Error::domain(format!(
            "bessel_theta arguments must lie in [0, 1], got ({x1}, {x2})"
        )));
    }
    if zeros.is_empty() {
        return Err(Error::domain("bessel_theta needs a nonempty zeros table"));
    }
    let anu = nu.abs();
    let mnu = -nu;
    let prefactor = 2.0 * (x1 * x2).powf(anu);
    if prefactor == 0.0 {
        // x = 0 annihilates every term for |nu| > 0.
        return Ok(SeriesValue {
            value: 0.0,
            terms_used: 0,
        });
    }
    let budget = ctl.max_terms.min(zeros.len());
    let t2 = theta * theta;
    let mut sum = 0.0;
    for (n, &mu) in zeros.iter().take(budget).enumerate() {
        let damp = (-mu * mu * t2).exp();
        let denom = bessel_j(anu + 1.0, mu)?;
        let term = damp * bessel_j(mnu, mu * x1)? * bessel_j(mnu, mu * x2)? / (denom * denom);
        sum += term;
        // |J_m| <= 1 for m >= 0, so this envelope dominates later terms
        // (damping decreases in n, denominators grow like 2/(pi mu)).
        let envelope = prefactor * damp / (denom * denom);
        if envelope <= ctl.abs_tol {
            return Ok(SeriesValue {
                value: prefactor * sum,
                terms_used: n + 1,
            });
        }
    }
    Err(Error::Truncation {
        context: format!("bessel_theta(nu={nu}, theta={theta}, x1={x1}, x2={x2})"),
        terms_used: budget,
        last_term: prefactor * (-zeros[budget - 1].powi(2) * t2).exp(),
    })
}
