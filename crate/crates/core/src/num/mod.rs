//! Shared numerical building blocks: quadrature, ODE integration,
//! interpolation.

pub mod interp;
pub mod ode;
pub mod quad;

pub use interp::CubicSpline;
pub use ode::{solve_scalar, OdeSolution};
pub use quad::{integrate, integrate_default, simpson_composite, simpson_sampled, trapezoid_sampled, QuadResult};
