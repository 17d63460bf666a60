//! Green function of the heat equation on the strip [0, y] with absorbing
//! ends, its space derivatives, and the closed-form integrals of these
//! kernels that the boundary solver consumes.
//!
//! Every kernel exists in two exact forms: a mirror-image sum that
//! converges fast near the diagonal s -> tau, and a theta series that
//! converges fast away from it. `RepresentationPolicy` selects between
//! them; agreement of the two forms is the primary correctness check.
//!
//! The strip width `y` is the boundary level at the later time tau and is
//! held fixed inside each kernel evaluation. Spatial arguments are allowed
//! outside [0, y]: both expansions define the same smooth extension, and
//! moving-boundary quadratures do evaluate there.

use crate::error::{Error, Result};
use crate::kernels::policy::{KernelRep, RepresentationPolicy};
use crate::specfun::{erf, erfc, jacobi_theta3, jacobi_theta3_dz, SeriesControl, ThetaArgs};
use std::f64::consts::PI;

/// Free-space heat kernel exp(-u^2 / 4 delta) / sqrt(4 pi delta).
pub fn free_kernel(u: f64, delta: f64) -> f64 {
    (-u * u / (4.0 * delta)).exp() / (4.0 * PI * delta).sqrt()
}

fn check_args(y: f64, delta: f64) -> Result<()> {
    if !(y > 0.0) {
        return Err(Error::domain(format!("strip width must be positive, got {y}")));
    }
    if !(delta >= 0.0) {
        return Err(Error::domain(format!(
            "time separation must be nonnegative, got {delta}"
        )));
    }
    Ok(())
}

/// Nome of the theta-series forms, exp(-pi^2 delta / y^2).
fn nome(y: f64, delta: f64) -> f64 {
    (-PI * PI * delta / (y * y)).exp()
}

fn theta_control() -> SeriesControl {
    SeriesControl {
        max_terms: 512,
        abs_tol: 1e-16,
        report_terms_used: false,
    }
}

/// Strip Green function B0(x, tau | xi, s) with delta = tau - s.
///
/// Vanishes on both absorbing ends. At delta = 0 the off-diagonal value is
/// zero; the on-diagonal value is a delta distribution and is rejected.
pub fn b0(x: f64, xi: f64, y: f64, delta: f64, policy: &RepresentationPolicy) -> Result<f64> {
    check_args(y, delta)?;
    if delta == 0.0 {
        if x == xi {
            return Err(Error::domain(
                "strip kernel is distributional at zero time separation on the diagonal",
            ));
        }
        return Ok(0.0);
    }
    match policy.resolve(delta, y) {
        KernelRep::ImageSum => {
            let m = policy.image_terms as i64;
            let mut sum = 0.0;
            for n in -m..=m {
                let shift = 2.0 * n as f64 * y;
                sum += free_kernel(x - xi - shift, delta) - free_kernel(x + xi - shift, delta);
            }
            Ok(sum)
        }
        _ => {
            let w = nome(y, delta);
            let ctl = theta_control();
            let minus = jacobi_theta3(
                ThetaArgs {
                    z: PI * (x - xi) / (2.0 * y),
                    omega: w,
                },
                &ctl,
            )?;
            let plus = jacobi_theta3(
                ThetaArgs {
                    z: PI * (x + xi) / (2.0 * y),
                    omega: w,
                },
                &ctl,
            )?;
            Ok((minus.value - plus.value) / (2.0 * y))
        }
    }
}

/// Derivative of the strip kernel in its first spatial argument,
/// dB0/dx (x, tau | xi, s).
pub fn b0_dx(x: f64, xi: f64, y: f64, delta: f64, policy: &RepresentationPolicy) -> Result<f64> {
    check_args(y, delta)?;
    if delta == 0.0 {
        if x == xi {
            return Err(Error::domain(
                "strip kernel derivative is distributional at zero time separation on the diagonal",
            ));
        }
        return Ok(0.0);
    }
    match policy.resolve(delta, y) {
        KernelRep::ImageSum => {
            let m = policy.image_terms as i64;
            let mut sum = 0.0;
            for n in -m..=m {
                let shift = 2.0 * n as f64 * y;
                let um = x - xi - shift;
                let up = x + xi - shift;
                sum += (-um * free_kernel(um, delta) + up * free_kernel(up, delta)) / (2.0 * delta);
            }
            Ok(sum)
        }
        _ => {
            let w = nome(y, delta);
            let ctl = theta_control();
            let minus = jacobi_theta3_dz(
                ThetaArgs {
                    z: PI * (x - xi) / (2.0 * y),
                    omega: w,
                },
                &ctl,
            )?;
            let plus = jacobi_theta3_dz(
                ThetaArgs {
                    z: PI * (x + xi) / (2.0 * y),
                    omega: w,
                },
                &ctl,
            )?;
            Ok(PI / (4.0 * y * y) * (minus.value - plus.value))
        }
    }
}

/// Derivative of the strip kernel in its second spatial argument,
/// dB0/dxi (x, tau | xi, s).
///
/// The strip kernel is symmetric under swapping its spatial arguments, so
/// this is the first-argument derivative with the arguments exchanged.
pub fn b1(x: f64, xi: f64, y: f64, delta: f64, policy: &RepresentationPolicy) -> Result<f64> {
    b0_dx(xi, x, y, delta, policy)
}

/// Flux kernel dB0/dx evaluated on the upper wall x = y.
///
/// This is the kernel of both the gradient-datum memory integral and the
/// source inner integral in the boundary equation. The image form places
/// sources at (2n + 1) y; the series form is a single theta derivative.
pub fn boundary_flux(xi: f64, y: f64, delta: f64, policy: &RepresentationPolicy) -> Result<f64> {
    check_args(y, delta)?;
    if delta == 0.0 {
        if xi == y {
            return Err(Error::domain(
                "wall flux kernel is distributional at zero time separation on the wall",
            ));
        }
        return Ok(0.0);
    }
    match policy.resolve(delta, y) {
        KernelRep::ImageSum => {
            let m = policy.image_terms as i64;
            let mut sum = 0.0;
            for n in -m..=m {
                let c = (2 * n + 1) as f64 * y;
                let u = c - xi;
                sum += (xi - c) * (-u * u / (4.0 * delta)).exp();
            }
            Ok(sum / (2.0 * PI.sqrt() * delta.powf(1.5)))
        }
        _ => {
            let w = nome(y, delta);
            let dz = jacobi_theta3_dz(
                ThetaArgs {
                    z: PI * (xi + y) / (2.0 * y),
                    omega: w,
                },
                &theta_control(),
            )?;
            Ok(-PI / (2.0 * y * y) * dz.value)
        }
    }
}

/// Wall flux kernel with its direct image removed: the n = 0 source term
/// (xi - y) exp(-(y - xi)^2 / 4 delta) / (2 sqrt(pi) delta^(3/2)) is
/// subtracted, leaving the smooth reflected part.
pub fn upsilon_plus(xi: f64, y: f64, delta: f64, policy: &RepresentationPolicy) -> Result<f64> {
    check_args(y, delta)?;
    if delta == 0.0 {
        return Err(Error::domain(
            "reflected wall flux needs a positive time separation",
        ));
    }
    let scale = 2.0 * PI.sqrt() * delta.powf(1.5);
    match policy.resolve(delta, y) {
        KernelRep::ImageSum => {
            let m = policy.image_terms as i64;
            let mut sum = 0.0;
            for n in -m..=m {
                if n == 0 {
                    continue;
                }
                let c = (2 * n + 1) as f64 * y;
                let u = c - xi;
                sum += (xi - c) * (-u * u / (4.0 * delta)).exp();
            }
            Ok(sum / scale)
        }
        _ => {
            let full = boundary_flux(xi, y, delta, &RepresentationPolicy::theta_only())?;
            let direct = (xi - y) * (-(y - xi) * (y - xi) / (4.0 * delta)).exp() / scale;
            Ok(full - direct)
        }
    }
}

/// Integral of the wall flux kernel over the full strip,
/// int_0^y dB0/dx (y, tau | xi, s) dxi.
///
/// Tends to -1 / sqrt(pi delta) as delta -> 0: near the diagonal the wall
/// only sees its own direct image.
pub fn boundary_flux_mass(y: f64, delta: f64, policy: &RepresentationPolicy) -> Result<f64> {
    check_args(y, delta)?;
    if delta == 0.0 {
        return Err(Error::domain(
            "wall flux mass diverges at zero time separation",
        ));
    }
    match policy.resolve(delta, y) {
        KernelRep::ImageSum => {
            // Each image integrates to a difference of Gaussians in closed
            // form; c = (2n + 1) y gives exponents n^2 y^2 / delta and
            // (2n + 1)^2 y^2 / (4 delta).
            let m = policy.image_terms as i64;
            let mut sum = 0.0;
            for n in -m..=m {
                let nf = n as f64;
                let c = (2.0 * nf + 1.0) * y;
                sum += (-(nf * y) * (nf * y) / delta).exp() - (-c * c / (4.0 * delta)).exp();
            }
            Ok(-sum / (PI * delta).sqrt())
        }
        _ => {
            // Term-wise integration of the sine series: even harmonics
            // vanish and odd ones contribute -4/y each.
            let mut sum = 0.0;
            let mut n = 1u32;
            loop {
                let wn = PI * n as f64 / y;
                let term = (-wn * wn * delta).exp();
                sum += term;
                if term < 1e-18 {
                    break;
                }
                n += 2;
                if n > 20_001 {
                    return Err(Error::Truncation {
                        context: format!("wall flux mass series (y = {y}, delta = {delta})"),
                        terms_used: n as usize / 2,
                        last_term: term,
                    });
                }
            }
            Ok(-4.0 / y * sum)
        }
    }
}

/// Mass of the free kernel centred at c over [a, b],
/// int_a^b exp(-(xi - c)^2 / 4 delta) / sqrt(4 pi delta) dxi.
pub fn mass(a: f64, b: f64, c: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::domain(format!(
            "free kernel mass needs a positive time separation, got {delta}"
        )));
    }
    let h = 2.0 * delta.sqrt();
    Ok(0.5 * (erf((b - c) / h) - erf((a - c) / h)))
}

/// First moment of the free kernel centred at c over [a, b],
/// int_a^b xi exp(-(xi - c)^2 / 4 delta) / sqrt(4 pi delta) dxi.
pub fn first_moment(a: f64, b: f64, c: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::domain(format!(
            "free kernel moment needs a positive time separation, got {delta}"
        )));
    }
    let h = 2.0 * delta.sqrt();
    let gauss = |u: f64| (-u * u / (4.0 * delta)).exp();
    Ok(c * 0.5 * (erf((b - c) / h) - erf((a - c) / h))
        - (delta / PI).sqrt() * (gauss(b - c) - gauss(a - c)))
}

/// One image term of the source inner integral, written with erfc
/// differences so that saturated error functions never cancel.
fn lambda_inner_image_term(y_s: f64, c: f64, delta: f64) -> f64 {
    let h = 2.0 * delta.sqrt();
    let gauss = -(y_s / (PI * delta).sqrt()) * (-(y_s - c) * (y_s - c) / (4.0 * delta)).exp();
    let erf_pair = if c > y_s {
        erfc((c - y_s) / h) - erfc(c / h)
    } else if c > 0.0 {
        erf((y_s - c) / h) + erf(c / h)
    } else {
        erfc(-c / h) - erfc((y_s - c) / h)
    };
    gauss + erf_pair
}

/// First moment of the wall flux kernel over the earlier boundary level,
/// int_0^{y(s)} xi dB0/dx (y(tau), tau | xi, s) dxi.
///
/// This is the geometric factor of the source memory integral; the caller
/// multiplies by the datum-slope coefficient.
pub fn lambda_inner(y_tau: f64, y_s: f64, delta: f64, policy: &RepresentationPolicy) -> Result<f64> {
    check_args(y_tau, delta)?;
    if !(y_s > 0.0) {
        return Err(Error::domain(format!(
            "earlier boundary level must be positive, got {y_s}"
        )));
    }
    if delta == 0.0 {
        return Err(Error::domain(
            "source inner integral diverges at zero time separation",
        ));
    }
    match policy.resolve(delta, y_tau) {
        KernelRep::ImageSum => {
            let m = policy.image_terms as i64;
            let mut sum = 0.0;
            for n in -m..=m {
                let c = (2 * n + 1) as f64 * y_tau;
                sum += lambda_inner_image_term(y_s, c, delta);
            }
            Ok(sum)
        }
        _ => {
            // Term-wise integral of the sine series:
            // (2/y) sum (-1)^n e^{-w_n^2 delta} [sin(w_n Y)/w_n - Y cos(w_n Y)].
            let mut sum = 0.0;
            let mut sign = -1.0;
            for n in 1..=20_000u32 {
                let wn = PI * n as f64 / y_tau;
                let damp = (-wn * wn * delta).exp();
                let term = sign * damp * ((wn * y_s).sin() / wn - y_s * (wn * y_s).cos());
                sum += term;
                let envelope = damp * (1.0 / wn + y_s);
                if envelope < 1e-17 {
                    return Ok(2.0 / y_tau * sum);
                }
                sign = -sign;
            }
            Err(Error::Truncation {
                context: format!(
                    "source inner integral series (y_tau = {y_tau}, y_s = {y_s}, delta = {delta})"
                ),
                terms_used: 20_000,
                last_term: f64::NAN,
            })
        }
    }
}
