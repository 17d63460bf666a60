//! Cumulative-integral caches for the coordinate transforms. Each grid
//! panel is integrated once by adaptive quadrature; queries between nodes
//! use cubic Hermite interpolation with the exact integrand slopes, so the
//! cached map stays smooth and cheap to evaluate many thousands of times.

use crate::error::{Error, Result};
use crate::num::quad;

/// Default node count for transform caches.
pub const DEFAULT_CACHE_NODES: usize = 512;

/// Tabulation of I(t) = int_0^t f(s) ds on a uniform grid over [0, t_max].
#[derive(Debug, Clone)]
pub struct CachedCumulative {
    t_max: f64,
    h: f64,
    vals: Vec<f64>,
    ders: Vec<f64>,
}

impl CachedCumulative {
    /// Integrates `f` panel by panel over a uniform grid with `nodes` points
    /// (at least 8 are used) and stores the running sums together with the
    /// integrand values at the nodes.
    pub fn build<F: Fn(f64) -> f64>(f: F, t_max: f64, nodes: usize) -> Result<Self> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::domain(format!(
                "cumulative cache needs a positive horizon, got {t_max}"
            )));
        }
        let n = nodes.max(8);
        let h = t_max / (n - 1) as f64;
        let mut vals = Vec::with_capacity(n);
        let mut ders = Vec::with_capacity(n);
        vals.push(0.0);
        ders.push(f(0.0));
        let mut acc = 0.0;
        for i in 1..n {
            let a = (i - 1) as f64 * h;
            let b = if i == n - 1 { t_max } else { i as f64 * h };
            acc += quad::integrate(&f, a, b, 1e-13, 1e-13).value;
            vals.push(acc);
            ders.push(f(b));
        }
        if vals.iter().chain(ders.iter()).any(|v| !v.is_finite()) {
            return Err(Error::domain(
                "cumulative cache integrand produced a non-finite value".to_string(),
            ));
        }
        Ok(CachedCumulative { t_max, h, vals, ders })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// True when the stored node values strictly increase, i.e. the
    /// integrand kept a positive integral on every panel.
    pub fn is_strictly_increasing(&self) -> bool {
        self.vals.windows(2).all(|w| w[1] > w[0])
    }

    /// I(t_max), the full integral.
    pub fn total(&self) -> f64 {
        *self.vals.last().unwrap()
    }

    /// Segment index and local coordinate for a query clamped to the grid.
    fn locate(&self, t: f64) -> (usize, f64) {
        let tc = t.clamp(0.0, self.t_max);
        let mut i = (tc / self.h) as usize;
        if i >= self.vals.len() - 1 {
            i = self.vals.len() - 2;
        }
        (i, (tc - i as f64 * self.h) / self.h)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (i, s) = self.locate(t);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.vals[i]
            + (s3 - 2.0 * s2 + s) * self.h * self.ders[i]
            + (-2.0 * s3 + 3.0 * s2) * self.vals[i + 1]
            + (s3 - s2) * self.h * self.ders[i + 1]
    }

    /// Derivative of the interpolant, which is the integrand up to the
    /// Hermite interpolation error.
    pub fn deriv(&self, t: f64) -> f64 {
        let (i, s) = self.locate(t);
        let s2 = s * s;
        (6.0 * s2 - 6.0 * s) * (self.vals[i] - self.vals[i + 1]) / self.h
            + (3.0 * s2 - 4.0 * s + 1.0) * self.ders[i]
            + (3.0 * s2 - 2.0 * s) * self.ders[i + 1]
    }

    /// Solves eval(t) = target for a strictly increasing cumulative:
    /// bracket on the stored nodes, then safeguarded Newton in the segment.
    pub fn invert_increasing(&self, target: f64) -> Result<f64> {
        let total = self.total();
        let pad = 1e-11 * (1.0 + total.abs());
        if target < -pad || target > total + pad {
            return Err(Error::domain(format!(
                "inverse target {target:.6e} outside cumulative range [0, {total:.6e}]"
            )));
        }
        let tc = target.clamp(0.0, total);
        let idx = self.vals.partition_point(|v| *v < tc);
        let i = idx.clamp(1, self.vals.len() - 1) - 1;
        let mut lo = i as f64 * self.h;
        let mut hi = ((i + 1) as f64 * self.h).min(self.t_max);
        let mut t = 0.5 * (lo + hi);
        for _ in 0..60 {
            let v = self.eval(t) - tc;
            if v > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let d = self.deriv(t);
            let step = if d > 0.0 { v / d } else { f64::INFINITY };
            let mut next = t - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() < 1e-15 * (1.0 + t.abs()) {
                t = next;
                break;
            }
            t = next;
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_of_cosine_matches_sine() {
        let c = CachedCumulative::build(|t| t.cos(), 3.0, DEFAULT_CACHE_NODES).unwrap();
        for i in 0..50 {
            let t = 3.0 * (i as f64 + 0.37) / 50.0;
            assert!((c.eval(t) - t.sin()).abs() < 1e-10, "t = {t}");
            assert!((c.deriv(t) - t.cos()).abs() < 1e-7, "t = {t}");
        }
        assert!((c.total() - 3.0f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn node_values_are_panel_exact() {
        let c = CachedCumulative::build(|t| (2.0 * t).exp(), 1.0, 64).unwrap();
        let h = 1.0 / 63.0;
        for i in [1usize, 17, 40, 63] {
            let t = if i == 63 { 1.0 } else { i as f64 * h };
            let exact = 0.5 * ((2.0 * t).exp() - 1.0);
            assert!((c.eval(t) - exact).abs() < 1e-12 * exact.max(1.0));
        }
    }

    #[test]
    fn inverse_round_trips() {
        let c = CachedCumulative::build(|t| 1.0 + t * t, 2.0, 256).unwrap();
        for i in 0..30 {
            let t = 2.0 * (i as f64 + 0.5) / 30.0;
            let target = t + t * t * t / 3.0;
            let back = c.invert_increasing(target).unwrap();
            assert!((back - t).abs() < 1e-11, "t = {t}, back = {back}");
        }
        assert!((c.invert_increasing(0.0).unwrap()).abs() < 1e-12);
        assert!((c.invert_increasing(c.total()).unwrap() - 2.0).abs() < 1e-11);
    }

    #[test]
    fn inverse_rejects_out_of_range_targets() {
        let c = CachedCumulative::build(|_| 1.0, 1.0, 16).unwrap();
        assert!(c.invert_increasing(-0.5).is_err());
        assert!(c.invert_increasing(1.5).is_err());
    }

    #[test]
    fn rejects_bad_horizon() {
        assert!(CachedCumulative::build(|_| 1.0, 0.0, 16).is_err());
        assert!(CachedCumulative::build(|_| 1.0, -1.0, 16).is_err());
    }
}
