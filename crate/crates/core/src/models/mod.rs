//! Model definitions and the changes of variables that reduce each pricing
//! PDE to heat or Bessel form, plus affine zero-coupon bond pricing and
//! exercise-boundary values at maturity.

pub mod cache;
pub mod cev;
pub mod cir;
pub mod curve;
pub mod hw;
pub mod init;
pub mod option;
pub mod ou;
pub mod zcb;

pub use cache::{CachedCumulative, DEFAULT_CACHE_NODES};
pub use curve::TimeCurve;
pub use option::{OptionKind, OptionSpec};
pub use cev::{cev_build_transform, CevModel, CevTransform};
pub use cir::{cir_build_transform, CirModel, CirTransform};
pub use hw::{hw_build_transform, HwModel, HwSourceCoeffs, HwTransform};
pub use init::{boundary_initial_value, kim_terminal_spot, ModelTransforms};
pub use ou::{ou_build_transform, ou_riccati_solve, OuModel, OuTransform};
pub use zcb::{affine_zcb_cir, affine_zcb_hull_white, AffineKind, AffineZcb};
