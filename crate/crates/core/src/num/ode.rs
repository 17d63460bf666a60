//! Adaptive explicit Runge-Kutta integration for the small scalar ODEs the
//! transforms need (Riccati equations). Cash-Karp 4(5) embedded pair.

use crate::error::{Error, Result};

const A: [f64; 6] = [0.0, 0.2, 0.3, 0.6, 1.0, 0.875];
const B21: f64 = 0.2;
const B31: f64 = 3.0 / 40.0;
const B32: f64 = 9.0 / 40.0;
const B41: f64 = 0.3;
const B42: f64 = -0.9;
const B43: f64 = 1.2;
const B51: f64 = -11.0 / 54.0;
const B52: f64 = 2.5;
const B53: f64 = -70.0 / 27.0;
const B54: f64 = 35.0 / 27.0;
const B61: f64 = 1631.0 / 55296.0;
const B62: f64 = 175.0 / 512.0;
const B63: f64 = 575.0 / 13824.0;
const B64: f64 = 44275.0 / 110592.0;
const B65: f64 = 253.0 / 4096.0;
const C1: f64 = 37.0 / 378.0;
const C3: f64 = 250.0 / 621.0;
const C4: f64 = 125.0 / 594.0;
const C6: f64 = 512.0 / 1771.0;
const DC1: f64 = C1 - 2825.0 / 27648.0;
const DC3: f64 = C3 - 18575.0 / 48384.0;
const DC4: f64 = C4 - 13525.0 / 55296.0;
const DC5: f64 = -277.0 / 14336.0;
const DC6: f64 = C6 - 0.25;

/// Dense output of a scalar ODE solve: strictly ordered sample times with
/// the solution values at them.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub ts: Vec<f64>,
    pub ys: Vec<f64>,
}

/// One Cash-Karp step from (t, y) with size h. Returns (y_next, error_est).
fn ck_step<F: Fn(f64, f64) -> f64>(f: &F, t: f64, y: f64, h: f64) -> (f64, f64) {
    let k1 = f(t, y);
    let k2 = f(t + A[1] * h, y + h * B21 * k1);
    let k3 = f(t + A[2] * h, y + h * (B31 * k1 + B32 * k2));
    let k4 = f(t + A[3] * h, y + h * (B41 * k1 + B42 * k2 + B43 * k3));
    let k5 = f(t + A[4] * h, y + h * (B51 * k1 + B52 * k2 + B53 * k3 + B54 * k4));
    let k6 = f(
        t + A[5] * h,
        y + h * (B61 * k1 + B62 * k2 + B63 * k3 + B64 * k4 + B65 * k5),
    );
    let y_next = y + h * (C1 * k1 + C3 * k3 + C4 * k4 + C6 * k6);
    let err = h * (DC1 * k1 + DC3 * k3 + DC4 * k4 + DC5 * k5 + DC6 * k6);
    (y_next, err)
}

/// Integrates dy/dt = f(t, y) from `t0` to `t1` (either direction) with
/// adaptive step control at tolerance `abs_tol + rel_tol * |y|`, recording
/// every accepted step. Fails if the solution magnitude exceeds `y_cap`
/// (blow-up guard for Riccati equations), reporting the time reached.
pub fn solve_scalar<F: Fn(f64, f64) -> f64>(
    f: &F,
    t0: f64,
    t1: f64,
    y0: f64,
    abs_tol: f64,
    rel_tol: f64,
    y_cap: f64,
) -> Result<OdeSolution> {
    let mut ts = vec![t0];
    let mut ys = vec![y0];
    if t0 == t1 {
        return Ok(OdeSolution { ts, ys });
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span / 100.0).min(0.1 * span.max(1e-8));
    let h_min = span * 1e-14;
    let mut steps = 0usize;
    const MAX_STEPS: usize = 1_000_000;
    while (t1 - t) * dir > 0.0 {
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let (y_next, err) = ck_step(f, t, y, h);
        let tol = abs_tol + rel_tol * y.abs().max(y_next.abs());
        let ratio = (err.abs() / tol).max(1e-16);
        if ratio <= 1.0 {
            t += h;
            y = y_next;
            ts.push(t);
            ys.push(y);
            if !y.is_finite() || y.abs() > y_cap {
                return Err(Error::Ode(format!(
                    "solution blow-up at t = {t:.6} (|y| = {:.3e})",
                    y.abs()
                )));
            }
            // Standard 0.2-power growth with a safety factor, capped at 5x.
            h *= (0.9 * ratio.powf(-0.2)).min(5.0);
        } else {
            h *= (0.9 * ratio.powf(-0.25)).max(0.1);
        }
        if h.abs() < h_min {
            return Err(Error::Ode(format!(
                "step size underflow at t = {t:.6} (h = {h:.3e})"
            )));
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Ode(format!("step budget exhausted at t = {t:.6}")));
        }
    }
    Ok(OdeSolution { ts, ys })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let sol = solve_scalar(&|_, y| -2.0 * y, 0.0, 3.0, 1.5, 1e-12, 1e-12, 1e12).unwrap();
        let y_end = *sol.ys.last().unwrap();
        assert!((y_end - 1.5 * (-6.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn backward_integration_works() {
        // y' = y integrated from t=1 back to t=0 with y(1)=e gives y(0)=1.
        let sol = solve_scalar(&|_, y| y, 1.0, 0.0, 1f64.exp(), 1e-12, 1e-12, 1e12).unwrap();
        assert!((sol.ys.last().unwrap() - 1.0).abs() < 1e-10);
        assert!(sol.ts.windows(2).all(|w| w[1] < w[0]), "times must decrease");
    }

    #[test]
    fn riccati_blow_up_is_reported() {
        // y' = y^2, y(0) = 1 blows up at t = 1.
        let err = solve_scalar(&|_, y| y * y, 0.0, 2.0, 1.0, 1e-10, 1e-10, 1e8);
        match err {
            Err(Error::Ode(msg)) => assert!(
                msg.contains("blow-up") || msg.contains("step size"),
                "unexpected message: {msg}"
            ),
            other => panic!("expected ODE failure, got {other:?}"),
        }
    }

    #[test]
    fn nonautonomous_rhs_matches_quadrature() {
        // y' = cos(t), y(0) = 0 so y(t) = sin(t).
        let sol = solve_scalar(&|t, _| t.cos(), 0.0, 2.0, 0.0, 1e-12, 1e-12, 1e12).unwrap();
        assert!((sol.ys.last().unwrap() - 2f64.sin()).abs() < 1e-10);
    }
}
