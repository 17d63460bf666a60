//! Semi-analytical American option pricing via boundary integral equations.
//!
//! The early-exercise boundary of an American option under a time-dependent
//! diffusion model satisfies a nonlinear Volterra integral equation of the
//! second kind once the pricing PDE is reduced to a canonical (heat or
//! Bessel) form by a change of variables. This crate implements that
//! reduction and the boundary solve for three model families:
//!
//! * time-dependent Ornstein-Uhlenbeck (calls on a stock),
//! * time-dependent Hull-White (puts on a zero-coupon bond),
//! * CEV with elasticity beta in (-1, 0) (calls on a stock),
//!
//! plus CIR zero-coupon bonds and the CIR change of variables for
//! validation. Option prices and Deltas are reconstructed from the solved
//! boundary through Green-function series. An independent Crank-Nicolson
//! finite-difference solver with projected SOR serves as a validation
//! oracle for boundaries and prices.
//!
//! Layout:
//! * [`num`]: quadrature, ODE integration, interpolation.
//! * [`specfun`]: Jacobi theta, error functions, Bessel J and its zeros,
//!   the Bessel theta kernel, 1F2, generalized exponential integral.
//! * [`models`]: parameter curves, per-model changes of variables, affine
//!   zero-coupon bonds, boundary values at maturity.
//! * [`kernels`]: Green-function kernels and closed-form inner integrals.
//! * [`volterra`]: boundary-equation assembly and the two solvers.
//! * [`pricing`]: price and Delta reconstruction from a solved boundary.
//! * [`oracle`]: finite-difference reference pricer and boundary extraction.

pub mod error;
pub mod kernels;
pub mod models;
pub mod num;
pub mod oracle;
pub mod pricing;
pub mod specfun;
pub mod volterra;

pub use error::{Error, Result};
