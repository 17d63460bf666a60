//! Quadrature for memory integrals with an inverse-square-root endpoint weight.

use super::config::QuadRule;

/// Relative accuracy target of the refinement ladder.
const LADDER_TOL: f64 = 1e-12;

/// Panel count of the coarsest ladder rung.
const BASE_PANELS: usize = 8;

/// Number of ladder doublings before giving up on further refinement.
const MAX_LEVELS: usize = 12;

/// Integrates `smooth_factor(s) * (tau - s)^(-1/2)` over `[0, tau]` when
/// `order_half` is set, and plain `smooth_factor(s)` otherwise.
///
/// The substitution `s = tau - v^2` removes the endpoint weight and maps
/// either integral to a smooth one on `[0, sqrt(tau)]`, where a composite
/// rule of the configured base order is refined by doubling until successive
/// values agree to near machine precision. Without the weight the transformed
/// integrand carries a factor `2 v` that vanishes at `v = 0`, so the factor
/// is never sampled exactly at `s = tau`; with the weight the caller must
/// return the diagonal limit when called at `s = tau`. Nonpositive `tau`
/// yields zero.
pub fn singular_quadrature<F: Fn(f64) -> f64>(
    smooth_factor: &F,
    tau: f64,
    order_half: bool,
    rule: QuadRule,
) -> f64 {
    if !(tau > 0.0) {
        return 0.0;
    }
    let v_max = tau.sqrt();
    let transformed = |v: f64| {
        if !order_half && v == 0.0 {
            return 0.0;
        }
        let s = (tau - v * v).max(0.0);
        let f = smooth_factor(s);
        if order_half {
            2.0 * f
        } else {
            2.0 * v * f
        }
    };

    let mut panels = BASE_PANELS;
    let mut step = v_max / panels as f64;
    let mut trap: f64 = 0.5 * (transformed(0.0) + transformed(v_max));
    for i in 1..panels {
        trap += transformed(i as f64 * step);
    }
    trap *= step;

    // Refinement ladder: each level halves the step, reusing prior samples.
    // The trapezoid rule accelerates through a Richardson table so both
    // configurations reach the same internal tolerance; Simpson keeps just
    // the first extrapolation column, which is exactly composite Simpson.
    let mut romberg = vec![trap];
    let mut value = trap;
    let mut prev_diff = f64::INFINITY;
    for level in 1..=MAX_LEVELS {
        let mut midpoint_sum = 0.0;
        for i in 0..panels {
            midpoint_sum += transformed((i as f64 + 0.5) * step);
        }
        let trap_next = 0.5 * romberg[0] + 0.5 * step * midpoint_sum;
        panels *= 2;
        step *= 0.5;

        let (next_value, next_row) = match rule {
            QuadRule::Simpson => {
                let simpson = (4.0 * trap_next - romberg[0]) / 3.0;
                (simpson, vec![trap_next, simpson])
            }
            QuadRule::Trapezoid => {
                let mut row = vec![trap_next];
                let mut factor = 1.0;
                for prior in &romberg {
                    factor *= 4.0;
                    let last = *row.last().expect("row is nonempty");
                    row.push(last + (last - prior) / (factor - 1.0));
                }
                (*row.last().expect("row is nonempty"), row)
            }
        };

        let diff = (next_value - value).abs();
        value = next_value;
        romberg = next_row;
        let tol = LADDER_TOL * value.abs().max(1.0);
        // A stagnating difference only counts as a rounding plateau once it
        // is already small; erratic differences early in the ladder mean
        // the integrand is not yet resolved and refinement must continue.
        let plateau = level >= 3 && diff >= prev_diff && diff <= 1e-9 * value.abs().max(1.0);
        if diff <= tol || plateau {
            break;
        }
        prev_diff = diff;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::quad;
    use std::cell::Cell;
    use std::f64::consts::PI;

    #[test]
    fn constant_factor_with_weight_is_exact() {
        for tau in [1e-6, 0.37, 2.0, 719.0] {
            let got = singular_quadrature(&|_| 1.0, tau, true, QuadRule::Simpson);
            let exact = 2.0 * tau.sqrt();
            assert!(
                (got - exact).abs() <= 1e-14 * exact,
                "tau {tau}: got {got}, exact {exact}"
            );
            let trap = singular_quadrature(&|_| 1.0, tau, true, QuadRule::Trapezoid);
            assert!((trap - exact).abs() <= 1e-14 * exact);
        }
    }

    #[test]
    fn exponential_factor_with_weight_matches_adaptive_reference() {
        let tau = 1.3;
        let got = singular_quadrature(&|s| (-s).exp(), tau, true, QuadRule::Simpson);
        // Reference from the same substitution handed to the adaptive rule.
        let reference = quad::integrate(
            &|v: f64| 2.0 * (-(tau - v * v)).exp(),
            0.0,
            tau.sqrt(),
            1e-14,
            1e-14,
        )
        .value;
        assert!(
            (got - reference).abs() <= 1e-10,
            "got {got}, reference {reference}"
        );
    }

    #[test]
    fn linear_difference_quotient_with_weight_is_exact() {
        // With y linear, (y(tau) - y(s)) / (tau - s) is the constant slope.
        let tau = 0.9;
        let slope = -1.7;
        let y = |s: f64| 4.0 + slope * s;
        let factor = move |s: f64| {
            if s == tau {
                slope
            } else {
                (y(tau) - y(s)) / (tau - s)
            }
        };
        let exact = slope * 2.0 * tau.sqrt();
        for rule in [QuadRule::Trapezoid, QuadRule::Simpson] {
            let got = singular_quadrature(&factor, tau, true, rule);
            assert!((got - exact).abs() <= 1e-10, "got {got}, exact {exact}");
        }
    }

    #[test]
    fn weightless_mode_integrates_smooth_factors() {
        let tau = 2.4;
        let got = singular_quadrature(&|s| (0.7 * s).sin() + 2.0, tau, false, QuadRule::Simpson);
        let exact = (1.0 - (0.7 * tau).cos()) / 0.7 + 2.0 * tau;
        assert!((got - exact).abs() <= 1e-11, "got {got}, exact {exact}");
    }

    #[test]
    fn weightless_mode_handles_half_powers_of_the_gap() {
        // The substitution turns (tau - s)^(3/2) into an even polynomial in v,
        // so the ladder converges fast and hits the exact value.
        let tau = 1.6;
        let got = singular_quadrature(&|s| (tau - s).powf(1.5), tau, false, QuadRule::Simpson);
        let exact = 0.4 * tau.powf(2.5);
        assert!((got - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn weightless_mode_never_samples_the_diagonal() {
        let tau = 0.8;
        let visited_diagonal = Cell::new(false);
        let factor = |s: f64| {
            if s >= tau {
                visited_diagonal.set(true);
            }
            1.0
        };
        let got = singular_quadrature(&factor, tau, false, QuadRule::Trapezoid);
        assert!(!visited_diagonal.get());
        assert!((got - tau).abs() <= 1e-13);
    }

    #[test]
    fn nonpositive_interval_yields_zero() {
        assert_eq!(singular_quadrature(&|_| 5.0, 0.0, true, QuadRule::Simpson), 0.0);
        assert_eq!(
            singular_quadrature(&|_| 5.0, -1.0, false, QuadRule::Trapezoid),
            0.0
        );
    }

    #[test]
    fn gaussian_bump_with_weight_matches_closed_form() {
        // int_0^tau e^{-(tau - s)} (tau - s)^{-1/2} ds = sqrt(pi) erf(sqrt(tau)).
        let tau = 3.1;
        let got = singular_quadrature(&|s| (-(tau - s)).exp(), tau, true, QuadRule::Simpson);
        let exact = PI.sqrt() * crate::specfun::erf(tau.sqrt());
        assert!((got - exact).abs() <= 1e-12, "got {got}, exact {exact}");
    }
}
