//! Jacobi theta-3 and its z-derivative as nome series:
//! theta3(z, w) = 1 + 2 sum_{n>=1} w^{n^2} cos(2 n z),
//! theta3'(z, w) = -4 sum_{n>=1} n w^{n^2} sin(2 n z).
//!
//! The w^{n^2} decay makes these practical only for |w| clearly below 1;
//! kernel callers switch to image sums as w -> 1.

use crate::error::{Error, Result};
use crate::specfun::{SeriesControl, SeriesValue};

/// Arguments of theta3: angle z (radians) and nome omega with |omega| < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArgs {
    pub z: f64,
    pub omega: f64,
}

impl ThetaArgs {
    fn check(&self) -> Result<()> {
        if !(self.omega.abs() < 1.0) {
            return Err(Error::domain(format!(
                "theta3 nome must satisfy |omega| < 1, got {}",
                self.omega
            )));
        }
        Ok(())
    }
}

/// theta3(z, omega).
pub fn jacobi_theta3(args: ThetaArgs, ctl: &SeriesControl) -> Result<SeriesValue> {
    args.check()?;
    let mut sum = 1.0;
    // omega^{n^2} updated incrementally: ratio omega^{2n-1} between terms.
    let mut pow = 1.0;
    let mut odd = args.omega;
    let osq = args.omega * args.omega;
    for n in 1..=ctl.max_terms {
        pow *= odd;
        odd *= osq;
        let bound = 2.0 * pow.abs();
        sum += 2.0 * pow * (2.0 * n as f64 * args.z).cos();
        if bound <= ctl.abs_tol {
            return Ok(SeriesValue {
                value: sum,
                terms_used: n,
            });
        }
    }
    Err(Error::Truncation {
        context: format!("theta3(z={}, omega={})", args.z, args.omega),
        terms_used: ctl.max_terms,
        last_term: 2.0 * pow.abs(),
    })
}

/// d/dz theta3(z, omega).
pub fn jacobi_theta3_dz(args: ThetaArgs, ctl: &SeriesControl) -> Result<SeriesValue> {
    args.check()?;
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut odd = args.omega;
    let osq = args.omega * args.omega;
    for n in 1..=ctl.max_terms {
        pow *= odd;
        odd *= osq;
        let bound = 4.0 * n as f64 * pow.abs();
        sum -= 4.0 * n as f64 * pow * (2.0 * n as f64 * args.z).sin();
        if bound <= ctl.abs_tol {
            return Ok(SeriesValue {
                value: sum,
                terms_used: n,
            });
        }
    }
    Err(Error::Truncation {
        context: format!("theta3_dz(z={}, omega={})", args.z, args.omega),
        terms_used: ctl.max_terms,
        last_term: 4.0 * ctl.max_terms as f64 * pow.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn th3(z: f64, w: f64) -> f64 {
        jacobi_theta3(ThetaArgs { z, omega: w }, &SeriesControl::default())
            .unwrap()
            .value
    }

    fn th3dz(z: f64, w: f64) -> f64 {
        jacobi_theta3_dz(ThetaArgs { z, omega: w }, &SeriesControl::default())
            .unwrap()
            .value
    }

    #[test]
    fn zero_nome_gives_one_and_zero() {
        assert_eq!(th3(0.7, 0.0), 1.0);
        assert_eq!(th3dz(1.3, 0.0), 0.0);
    }

    #[test]
    fn matches_independent_summation_oracle() {
        // Direct term-by-term oracle with powf, no incremental update.
        let oracle: f64 = 1.0
            + 2.0
                * (1..60)
                    .map(|n| 0.5f64.powi((n * n) as i32))
                    .sum::<f64>();
        assert!((th3(0.0, 0.5) - oracle).abs() < 1e-13);
        // Frozen high-precision references.
        assert!((th3(0.0, 0.5) - 2.1289368272118771587).abs() < 1e-14);
        assert!((th3(0.7, 0.3) - 1.0866969908910607554).abs() < 1e-14);
        assert!((th3dz(0.6, 0.4) + 1.6281985017552288135).abs() < 1e-13);
    }

    #[test]
    fn pi_periodic_and_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let z = rng.gen_range(-3.0..3.0);
            let w = rng.gen_range(-0.9..0.9);
            assert!((th3(z, w) - th3(z + PI, w)).abs() < 1e-12);
            assert!((th3(z, w) - th3(-z, w)).abs() < 1e-12);
            assert!((th3dz(z, w) + th3dz(-z, w)).abs() < 1e-12);
        }
        assert_eq!(th3dz(0.0, 0.3), 0.0);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ctl = SeriesControl {
            max_terms: 256,
            ..SeriesControl::default()
        };
        for _ in 0..100 {
            let z: f64 = rng.gen_range(-2.0..2.0);
            let w: f64 = rng.gen_range(-0.95..0.95);
            let h = 1e-6;
            let fd = (jacobi_theta3(ThetaArgs { z: z + h, omega: w }, &ctl)
                .unwrap()
                .value
                - jacobi_theta3(ThetaArgs { z: z - h, omega: w }, &ctl)
                    .unwrap()
                    .value)
                / (2.0 * h);
            let an = jacobi_theta3_dz(ThetaArgs { z, omega: w }, &ctl).unwrap().value;
            assert!(
                (fd - an).abs() < 1e-7 * (1.0 + an.abs()),
                "z={z}, w={w}: fd {fd} vs {an}"
            );
        }
    }

    #[test]
    fn rejects_nome_outside_unit_disc() {
        assert!(jacobi_theta3(
            ThetaArgs { z: 0.0, omega: 1.0 },
            &SeriesControl::default()
        )
        .is_err());
        assert!(jacobi_theta3(
            ThetaArgs { z: 0.0, omega: -1.2 },
            &SeriesControl::default()
        )
        .is_err());
    }

    #[test]
    fn reports_truncation_failure_instead_of_silent_return() {
        let ctl = SeriesControl {
            max_terms: 3,
            abs_tol: 1e-14,
            report_terms_used: true,
        };
        let r = jacobi_theta3(ThetaArgs { z: 0.2, omega: 0.97 }, &ctl);
        match r {
            Err(crate::error::Error::Truncation { terms_used, .. }) => {
                assert_eq!(terms_used, 3)
            }
            other => panic!("expected truncation failure, got {other:?}"),
        }
    }

    #[test]
    fn evaluation_is_deterministic() {
        let a = th3(0.37, 0.81).to_bits();
        let b = th3(0.37, 0.81).to_bits();
        assert_eq!(a, b);
    }
}
