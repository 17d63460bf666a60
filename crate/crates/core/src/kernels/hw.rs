//! Half-line Gaussian kernels for the transformed bond-option problem and
//! closed forms for integrals of the exponential-linear source against
//! them.
//!
//! The transformed problem lives on the half-line above a moving wall. Its
//! building blocks are the free Gaussian, its mirror image across the
//! wall, and their x-derivatives; the source carries a factor
//! k0 exp(mu x) (u0 + u1 x), so every inner integral reduces to Gaussian
//! moments after completing the square.

use crate::error::{Error, Result};
use crate::kernels::heat::free_kernel;
use crate::models::HwSourceCoeffs;
use crate::specfun::erfc;
use std::f64::consts::PI;

/// Which half-line image component to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwImagePart {
    /// Free Gaussian centred at the source point.
    Direct,
    /// Gaussian mirrored across the wall at the later time.
    Reflected,
    /// x-derivative of the direct-minus-reflected pair.
    Derivative,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0) {
        return Err(Error::domain(format!(
            "half-line kernels need a positive time separation, got {delta}"
        )));
    }
    Ok(())
}

/// Image kernel components on the half-line above the wall y.
pub fn image_kernel(x: f64, xi: f64, y: f64, delta: f64, part: HwImagePart) -> Result<f64> {
    check_delta(delta)?;
    match part {
        HwImagePart::Direct => Ok(free_kernel(x - xi, delta)),
        HwImagePart::Reflected => Ok(free_kernel(x + xi - 2.0 * y, delta)),
        HwImagePart::Derivative => {
            let um = x - xi;
            let up = x + xi - 2.0 * y;
            Ok((-um * free_kernel(um, delta) + up * free_kernel(up, delta)) / (2.0 * delta))
        }
    }
}

/// Direct-minus-reflected pair, the Dirichlet kernel of the wall.
pub fn dirichlet_pair(x: f64, xi: f64, y: f64, delta: f64) -> Result<f64> {
    Ok(image_kernel(x, xi, y, delta, HwImagePart::Direct)?
        - image_kernel(x, xi, y, delta, HwImagePart::Reflected)?)
}

/// Mass of the free Gaussian centred at x above the level `lower`,
/// int_lower^inf exp(-(xi - x)^2 / 4 delta) / sqrt(4 pi delta) dxi.
pub fn half_line_mass(x: f64, lower: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(0.5 * erfc((lower - x) / (2.0 * delta.sqrt())))
}

/// Memory kernel of the gradient datum in the wall equation,
/// (y_tau - y_s) exp(-(y_tau - y_s)^2 / 4 delta) / (2 sqrt(pi) delta^(3/2)).
///
/// This is the x-derivative of the single-layer Gaussian at the wall,
/// including the factor 2 from the gradient jump relation.
pub fn single_layer_flux(y_tau: f64, y_s: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let u = y_tau - y_s;
    Ok(u * (-u * u / (4.0 * delta)).exp() / (2.0 * PI.sqrt() * delta.powf(1.5)))
}

/// Kernel the source is integrated against in the wall equation,
/// (xi - y_tau) exp(-(xi - y_tau)^2 / 4 delta) / (2 sqrt(pi) delta^(3/2)),
/// again carrying the jump factor 2.
pub fn source_flux(xi: f64, y_tau: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let u = xi - y_tau;
    Ok(u * (-u * u / (4.0 * delta)).exp() / (2.0 * PI.sqrt() * delta.powf(1.5)))
}

/// Gaussian tail moments M_k = int_z^inf v^k exp(-v^2 / 4 delta) dv for
/// k = 0, 1, 2.
fn tail_moments(z: f64, delta: f64) -> (f64, f64, f64) {
    let sqrt_pi_delta = (PI * delta).sqrt();
    let tail = erfc(z / (2.0 * delta.sqrt()));
    let gauss = (-z * z / (4.0 * delta)).exp();
    let m0 = sqrt_pi_delta * tail;
    let m1 = 2.0 * delta * gauss;
    let m2 = 2.0 * delta * (z * gauss + sqrt_pi_delta * tail);
    (m0, m1, m2)
}

/// Integral of the source against the free Gaussian over the half-line,
/// int_{y_s}^inf k0 e^{mu xi} (u0 + u1 xi) G(x - xi, delta) dxi.
pub fn lambda_free_integral(
    x: f64,
    y_s: f64,
    delta: f64,
    coeffs: &HwSourceCoeffs,
) -> Result<f64> {
    check_delta(delta)?;
    let mu = coeffs.mu;
    let center = x + 2.0 * mu * delta;
    let a_plus = coeffs.u0 + coeffs.u1 * center;
    let (m0, m1, _) = tail_moments(y_s - center, delta);
    let amp = coeffs.k0 * (mu * x + mu * mu * delta).exp();
    Ok(amp / (2.0 * (PI * delta).sqrt()) * (a_plus * m0 + coeffs.u1 * m1))
}

/// x-derivative of [`lambda_free_integral`], used for deltas of the
/// reconstructed price.
pub fn lambda_free_integral_dx(
    x: f64,
    y_s: f64,
    delta: f64,
    coeffs: &HwSourceCoeffs,
) -> Result<f64> {
    check_delta(delta)?;
    let mu = coeffs.mu;
    let center = x + 2.0 * mu * delta;
    let a_plus = coeffs.u0 + coeffs.u1 * center;
    let (m0, m1, m2) = tail_moments(y_s - center, delta);
    let amp = coeffs.k0 * (mu * x + mu * mu * delta).exp();
    let bracket = coeffs.u1 * m2
        + (a_plus + 2.0 * mu * delta * coeffs.u1) * m1
        + 2.0 * mu * delta * a_plus * m0;
    Ok(amp / (4.0 * PI.sqrt() * delta.powf(1.5)) * bracket)
}

/// Integral of the source against the wall flux kernel,
/// int_{y_s}^inf k0 e^{mu xi} (u0 + u1 xi) source_flux(xi, y_tau) dxi,
/// in closed form. Equals twice the wall trace of the free-integral
/// derivative.
pub fn lambda_flux_integral(
    y_tau: f64,
    y_s: f64,
    delta: f64,
    coeffs: &HwSourceCoeffs,
) -> Result<f64> {
    Ok(2.0 * lambda_free_integral_dx(y_tau, y_s, delta, coeffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::quad;

    fn coeffs() -> HwSourceCoeffs {
        HwSourceCoeffs {
            mu: 0.83,
            k0: 2.1e4,
            u0: -0.031,
            u1: 0.057,
        }
    }

    #[test]
    fn image_parts_are_plain_gaussians_and_reject_zero_separation() {
        let (x, xi, y, delta) = (-0.02, -0.05, -0.076, 0.04);
        let direct = image_kernel(x, xi, y, delta, HwImagePart::Direct).unwrap();
        let reflected = image_kernel(x, xi, y, delta, HwImagePart::Reflected).unwrap();
        assert!((direct - free_kernel(x - xi, delta)).abs() < 1e-15);
        assert!((reflected - free_kernel(x + xi - 2.0 * y, delta)).abs() < 1e-15);
        for part in [HwImagePart::Direct, HwImagePart::Reflected, HwImagePart::Derivative] {
            assert!(image_kernel(x, xi, y, 0.0, part).is_err());
        }
        assert!(half_line_mass(x, y, 0.0).is_err());
        assert!(single_layer_flux(x, xi, -1.0).is_err());
    }

    #[test]
    fn dirichlet_pair_vanishes_on_the_wall() {
        let y = -0.076;
        for &xi in &[-0.07, -0.02, 0.1] {
            for &delta in &[1e-3, 0.05, 0.4] {
                assert!(dirichlet_pair(y, xi, y, delta).unwrap().abs() < 1e-13);
            }
        }
    }

    #[test]
    fn derivative_part_matches_finite_differences_of_the_pair() {
        let (xi, y) = (-0.03, -0.076);
        let h = 1e-6;
        for &x in &[-0.07, -0.01, 0.05] {
            for &delta in &[0.01, 0.2] {
                let fd = (dirichlet_pair(x + h, xi, y, delta).unwrap()
                    - dirichlet_pair(x - h, xi, y, delta).unwrap())
                    / (2.0 * h);
                let closed = image_kernel(x, xi, y, delta, HwImagePart::Derivative).unwrap();
                assert!((closed - fd).abs() < 1e-5, "x={x} delta={delta}");
            }
        }
    }

    #[test]
    fn half_line_mass_is_the_gaussian_tail() {
        let cases: [(f64, f64, f64); 3] = [(0.02, -0.076, 0.05), (-0.1, -0.05, 0.3), (0.0, 0.2, 0.01)];
        for &(x, lower, delta) in &cases {
            let cut = x + 40.0 * delta.sqrt();
            let by_quad =
                quad::integrate(&|xi: f64| free_kernel(xi - x, delta), lower, cut, 1e-13, 1e-13)
                    .value;
            let closed = half_line_mass(x, lower, delta).unwrap();
            assert!(
                (closed - by_quad).abs() < 1e-12,
                "tail mass off at x={x} lower={lower} delta={delta}"
            );
        }
    }

    #[test]
    fn flux_kernels_are_antisymmetric_partners() {
        let (a, b, delta) = (-0.076, -0.041, 0.07);
        let sl = single_layer_flux(a, b, delta).unwrap();
        let sf = source_flux(b, a, delta).unwrap();
        assert!((sl + sf).abs() < 1e-15);
        assert!(sl != 0.0);
    }

    #[test]
    fn source_integrals_match_adaptive_quadrature() {
        let c = coeffs();
        let y_tau = -0.076;
        let y_s = -0.052;
        for &delta in &[1e-3, 0.05, 0.3] {
            let center = y_tau + 2.0 * c.mu * delta;
            let cut = center + 45.0 * delta.sqrt();
            let flux_quad = quad::integrate(
                &|xi: f64| c.eval(xi) * source_flux(xi, y_tau, delta).unwrap(),
                y_s,
                cut,
                1e-12,
                1e-12,
            )
            .value;
            let flux_closed = lambda_flux_integral(y_tau, y_s, delta, &c).unwrap();
            let scale = flux_closed.abs().max(1.0);
            assert!(
                (flux_closed - flux_quad).abs() / scale < 1e-8,
                "flux integral off at delta={delta}: {flux_closed} vs {flux_quad}"
            );

            let x = -0.03;
            let free_quad = quad::integrate(
                &|xi: f64| c.eval(xi) * free_kernel(x - xi, delta),
                y_s,
                x + 2.0 * c.mu * delta + 45.0 * delta.sqrt(),
                1e-12,
                1e-12,
            )
            .value;
            let free_closed = lambda_free_integral(x, y_s, delta, &c).unwrap();
            assert!(
                (free_closed - free_quad).abs() / free_closed.abs().max(1.0) < 1e-8,
                "free integral off at delta={delta}"
            );
        }
    }

    #[test]
    fn flux_integral_is_twice_the_free_derivative_at_the_wall() {
        let c = coeffs();
        for &(y_tau, y_s, delta) in &[(-0.076, -0.052, 0.02), (-0.06, -0.06, 0.15)] {
            let flux = lambda_flux_integral(y_tau, y_s, delta, &c).unwrap();
            let ddx = lambda_free_integral_dx(y_tau, y_s, delta, &c).unwrap();
            assert!((flux - 2.0 * ddx).abs() <= 1e-12 * flux.abs());
        }
    }

    #[test]
    fn free_integral_derivative_matches_finite_differences() {
        let c = coeffs();
        let (y_s, delta) = (-0.052, 0.08);
        let h = 1e-6;
        for &x in &[-0.07, -0.02, 0.04] {
            let fd = (lambda_free_integral(x + h, y_s, delta, &c).unwrap()
                - lambda_free_integral(x - h, y_s, delta, &c).unwrap())
                / (2.0 * h);
            let closed = lambda_free_integral_dx(x, y_s, delta, &c).unwrap();
            assert!(
                (closed - fd).abs() / closed.abs().max(1.0) < 1e-6,
                "derivative off at x={x}"
            );
        }
    }
}
