//! Special functions needed by the Green-function kernels: Jacobi theta-3,
//! error functions, gamma family, Bessel J of real order with its zeros,
//! the Bessel theta kernel, generalized hypergeometric 1F2, and the
//! generalized exponential integral.
//!
//! Everything is a pure function of its inputs. Series evaluations take a
//! [`SeriesControl`] and either converge (last term at or below `abs_tol`)
//! or fail loudly with a truncation error; nothing is silently truncated.

pub mod bessel;
pub mod erf;
pub mod expint;
pub mod gamma;
pub mod hyp;
pub mod theta;

pub use bessel::{bessel_j, bessel_theta, bessel_zeros};
pub use erf::{erf, erfc};
pub use expint::{expint_neg_int, expint_nu};
pub use gamma::{gamma, gamma_upper, lgamma, recip_gamma};
pub use hyp::hyp1f2;
pub use theta::{jacobi_theta3, jacobi_theta3_dz, ThetaArgs};

/// Truncation policy for infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Convergence threshold on the magnitude of the next term.
    pub abs_tol: f64,
    /// Whether callers intend to inspect `terms_used` (the count is always
    /// filled in either way).
    pub report_terms_used: bool,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 64,
            abs_tol: 1e-14,
            report_terms_used: false,
        }
    }
}

impl SeriesControl {
    /// A control with a larger term budget for slowly damped series
    /// (Bessel theta near the diagonal).
    pub fn with_max_terms(max_terms: usize) -> Self {
        SeriesControl {
            max_terms,
            ..SeriesControl::default()
        }
    }
}

/// A converged series value together with how many terms it needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
}

impl SeriesValue {
    pub fn value(self) -> f64 {
        self.value
    }
}
