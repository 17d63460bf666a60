//! Green-function kernels of the transformed pricing problems: the strip
//! kernel family for bounded domains, the half-line Gaussian images, the
//! radial Bessel kernels, and closed forms for their inner integrals.

pub mod cev;
pub mod heat;
pub mod hw;
pub mod policy;

pub use policy::{KernelRep, RepresentationPolicy};
