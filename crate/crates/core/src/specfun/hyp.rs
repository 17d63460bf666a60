//! Generalized hypergeometric 1F2 by direct term recurrence. The arguments
//! in scope are moderate (|z| up to ~150 before callers switch to
//! quadrature), so plain summation with a relative stopping rule suffices.

use crate::error::{Error, Result};
use crate::specfun::{SeriesControl, SeriesValue};

/// 1F2(a1; b1, b2; z) = sum_k (a1)_k / ((b1)_k (b2)_k k!) z^k.
pub fn hyp1f2(a1: f64, b1: f64, b2: f64, z: f64, ctl: &SeriesControl) -> Result<SeriesValue> {
    for (name, b) in [("b1", b1), ("b2", b2)] {
        if b <= 0.0 && b == b.floor() {
            return Err(Error::domain(format!(
                "hyp1f2 parameter {name} = {b} is a nonpositive integer (series pole)"
            )));
        }
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let max_terms = ctl.max_terms.max(500);
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a1 + kf) * z / ((b1 + kf) * (b2 + kf) * (kf + 1.0));
        sum += term;
        if term.abs() <= 1e-15 * sum.abs().max(1.0) {
            return Ok(SeriesValue {
                value: sum,
                terms_used: k + 1,
            });
        }
    }
    Err(Error::Truncation {
        context: format!("hyp1f2({a1}; {b1}, {b2}; {z})"),
        terms_used: max_terms,
        last_term: term.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a1: f64, b1: f64, b2: f64, z: f64) -> f64 {
        hyp1f2(a1, b1, b2, z, &SeriesControl::default()).unwrap().value
    }

    #[test]
    fn unit_at_zero_argument() {
        assert_eq!(f(0.7, 1.3, 2.9, 0.0), 1.0);
    }

    #[test]
    fn matches_factorial_form_oracle() {
        // Independent summation with explicit Pochhammer products.
        let poch = |a: f64, k: u32| -> f64 { (0..k).map(|i| a + i as f64).product() };
        let mut oracle = 0.0;
        let mut kfact = 1.0;
        for k in 0..60u32 {
            if k > 0 {
                kfact *= k as f64;
            }
            oracle += poch(1.0, k) * (-0.7f64).powi(k as i32) / (poch(2.0, k) * poch(3.0, k) * kfact);
        }
        let v = f(1.0, 2.0, 3.0, -0.7);
        assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
        assert!((v - 0.88990616083036137745).abs() < 1e-14);
    }

    #[test]
    fn matches_reference_at_negative_argument() {
        let v = f(1.5, 2.5, 0.8, -3.0);
        assert!((v + 0.22856719868861704452).abs() < 1e-13);
    }

    #[test]
    fn rejects_nonpositive_integer_denominators() {
        assert!(hyp1f2(1.0, 0.0, 2.0, 0.5, &SeriesControl::default()).is_err());
        assert!(hyp1f2(1.0, 1.0, -3.0, 0.5, &SeriesControl::default()).is_err());
    }
}
