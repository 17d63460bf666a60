//! Representation switching for the strip Green function.
//!
//! Every bounded-domain kernel has two exact expansions: a sum over mirror
//! images, which converges fastest close to the diagonal, and a
//! theta-series (spectral) form, which converges fastest far from it. The
//! dimensionless group pi^2 (tau - s) / y(tau)^2 is the nome exponent of
//! the spectral form and decides which side of the crossover a given
//! evaluation sits on.

/// Which expansion of a kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelRep {
    /// Pick automatically from the dimensionless time separation.
    Auto,
    /// Force the mirror-image sum.
    ImageSum,
    /// Force the theta-series form.
    ThetaSeries,
}

/// Evaluation policy shared by all strip kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentationPolicy {
    /// Representation selection mode.
    pub mode: KernelRep,
    /// Crossover value of pi^2 (tau - s) / y(tau)^2 below which `Auto`
    /// picks the image sum.
    pub switch_threshold: f64,
    /// Number of image terms kept on each side of n = 0.
    pub image_terms: usize,
}

impl Default for RepresentationPolicy {
    fn default() -> Self {
        RepresentationPolicy {
            mode: KernelRep::Auto,
            switch_threshold: 0.5,
            image_terms: 10,
        }
    }
}

impl RepresentationPolicy {
    /// A policy that always uses the image sum.
    pub fn image_only() -> Self {
        RepresentationPolicy {
            mode: KernelRep::ImageSum,
            ..RepresentationPolicy::default()
        }
    }

    /// A policy that always uses the theta series.
    pub fn theta_only() -> Self {
        RepresentationPolicy {
            mode: KernelRep::ThetaSeries,
            ..RepresentationPolicy::default()
        }
    }

    /// Resolve `Auto` for a concrete time separation `delta = tau - s` and
    /// strip width `y` (the boundary level at the later time).
    pub fn resolve(&self, delta: f64, y: f64) -> KernelRep {
        match self.mode {
            KernelRep::Auto => {
                let group = core::f64::consts::PI.powi(2) * delta / (y * y);
                if group < self.switch_threshold {
                    KernelRep::ImageSum
                } else {
                    KernelRep::ThetaSeries
                }
            }
            fixed => fixed,
        }
    }
}
